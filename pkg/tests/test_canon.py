import itertools
import random

import pytest

from conftest import RP2_SIX, relabel
from surfenum.canon import (
    canonical_form,
    canonical_witness,
    is_isomorphic,
    minimal_code,
    mixed_lex_compare,
    state_key,
)
from surfenum.cli import parse_triangulation_text
from surfenum.core import Triangulation
from surfenum.oracle import brute_force_enumerate


def brute_minimal_code(t: Triangulation):
    """Reference minimum over all label permutations (small V only)."""
    labels = list(range(1, t.vertex_count + 1))
    best = None
    for perm in itertools.permutations(labels):
        mapping = dict(zip(labels, perm))
        code = tuple(sorted(tuple(sorted(mapping[v] for v in tri))
                            for tri in t.triangles))
        if best is None or mixed_lex_compare(code, best) < 0:
            best = code
    return best


class TestMinimalCode:
    def test_projective_plane_fixture_is_canonical(self, rp2_six):
        # the standard 6-vertex projective plane is its own canonical form
        assert canonical_form(rp2_six).triangles == rp2_six.triangles

    def test_canonical_form_starts_with_vertex_one_star(self, octa, rp2_six):
        for t in (octa, rp2_six):
            code = minimal_code(t.triangles)
            assert code[0] == (1, 2, 3)
            assert code[1] == (1, 2, 4)

    def test_relabeling_invariance(self, tetra, octa, rp2_six, mobius, annulus):
        rng = random.Random(20240817)
        for t in (tetra, octa, rp2_six, mobius, annulus):
            reference = minimal_code(t.triangles)
            for _ in range(40):
                shuffled, _ = relabel(t, rng)
                assert minimal_code(shuffled.triangles) == reference

    def test_agrees_with_all_permutations_up_to_seven_vertices(self):
        corpus = brute_force_enumerate(7)
        checked = 0
        for codes in corpus.codes.values():
            for code in codes:
                t = Triangulation(code)
                assert minimal_code(t.triangles) == brute_minimal_code(t)
                checked += 1
        assert checked == 14

    def test_bounded_complexes_against_all_permutations(self, mobius, annulus):
        for t in (mobius, annulus):
            assert minimal_code(t.triangles) == brute_minimal_code(t)


class TestWitness:
    def test_witness_realizes_canonical_form(self, octa, rp2_six, mobius):
        rng = random.Random(99)
        for t in (octa, rp2_six, mobius):
            for _ in range(10):
                shuffled, _ = relabel(t, rng)
                w = canonical_witness(shuffled)
                image = tuple(sorted(tuple(sorted(w[v] for v in tri))
                                     for tri in shuffled.triangles))
                assert image == minimal_code(shuffled.triangles)


class TestMixedLexOrder:
    def test_higher_first_valence_wins(self, tetra, octa):
        # valence 4 at vertex 1 beats valence 3 despite longer triple list
        assert mixed_lex_compare(minimal_code(octa.triangles),
                                 minimal_code(tetra.triangles)) == -1
        assert mixed_lex_compare(minimal_code(tetra.triangles),
                                 minimal_code(octa.triangles)) == 1

    def test_equal(self, rp2_six):
        code = minimal_code(rp2_six.triangles)
        assert mixed_lex_compare(code, code) == 0

    def test_lex_tiebreak(self):
        a = ((1, 2, 3), (1, 2, 4), (1, 3, 4))
        b = ((1, 2, 3), (1, 2, 4), (1, 3, 5))
        assert mixed_lex_compare(a, b) == -1


class TestIsomorphism:
    def test_relabelings_are_isomorphic(self, rp2_six):
        rng = random.Random(5)
        shuffled, _ = relabel(rp2_six, rng)
        assert is_isomorphic(rp2_six, shuffled)

    def test_different_surfaces_are_not(self, tetra, octa):
        assert not is_isomorphic(tetra, octa)

    def test_same_size_nonisomorphic_spheres(self):
        corpus = brute_force_enumerate(6)
        spheres = [Triangulation(c) for key, codes in corpus.codes.items()
                   if key[0] == 6 and key[1].name == "S2" for c in codes]
        assert len(spheres) == 2
        assert not is_isomorphic(spheres[0], spheres[1])


class TestStateKey:
    def test_invariant_under_relabeling(self, mobius):
        rng = random.Random(31)
        marked = [(1, 4), (2, 5)]
        reference = state_key(mobius.triangles, marked)
        for _ in range(25):
            shuffled, mapping = relabel(mobius, rng)
            image = [tuple(sorted((mapping[a], mapping[b]))) for a, b in marked]
            assert state_key(shuffled.triangles, image) == reference

    def test_distinguishes_different_markings(self, mobius):
        # boundary edge (1, 4) vs interior edge (1, 2)
        assert (state_key(mobius.triangles, [(1, 4)])
                != state_key(mobius.triangles, [(1, 2)]))

    def test_merges_automorphic_markings(self):
        # in the tetrahedron every edge is equivalent to every other
        t = parse_triangulation_text("123 124 134 234")
        keys = {state_key(t.triangles, [e]) for e in t.edges()}
        assert len(keys) == 1

    def test_empty_marking_is_plain_code(self, rp2_six):
        code, marked = state_key(rp2_six.triangles, [])
        assert code == minimal_code(rp2_six.triangles)
        assert marked == ()
