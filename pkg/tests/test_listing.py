import itertools
from collections import Counter

import pytest

from surfenum.canon import minimal_code
from surfenum.cli import parse_triangulation_text
from surfenum.core import (
    PROJECTIVE_PLANE,
    SPHERE,
    SurfaceKind,
    Triangulation,
    boundary_cycles,
    classify,
    validate,
)
from surfenum.listing import (
    BoundaryLengthMismatchError,
    CountsTable,
    Decomposition,
    Disc,
    GenusSurface,
    GluingError,
    GluingTally,
    SearchConfig,
    closed_star_disc,
    enumerate_discs,
    enumerate_genus_surfaces,
    enumerate_main_discs,
    enumerate_nonroots,
    enumerate_roots,
    enumerate_spheres,
    genus_surface_admissible,
    glue_disc,
    grow_main_disc_step,
    main_disc_boundary_lower_bound,
    validate_decomposition,
)
from surfenum.moves import is_root
from surfenum.oracle import brute_force_enumerate


class TestSearchConfig:
    def test_specialization_defaults_to_small_budgets(self):
        assert SearchConfig(max_vertices=9).specialized is True
        assert SearchConfig(max_vertices=12).specialized is False

    def test_specialization_rejected_above_eleven(self):
        with pytest.raises(ValueError):
            SearchConfig(max_vertices=12, specialized=True)


class TestMainDiscGrowth:
    def test_closed_star(self):
        d = closed_star_disc(5)
        assert len(d.triangles) == 5
        assert d.boundary == (2, 3, 4, 5, 6)
        assert d.tally == GluingTally(0, 0)

    def test_one_edge_gluing_adds_boundary_vertex(self):
        d = closed_star_disc(5)
        grown = grow_main_disc_step(d, (2, 3), None)
        assert grown.boundary == (2, 7, 3, 4, 5, 6)
        assert grown.tally == GluingTally(1, 0)

    def test_two_edge_gluing_closes_a_corner(self):
        d = closed_star_disc(5)
        d = grow_main_disc_step(d, (2, 3), None)  # corner 7 between 2 and 3
        d = grow_main_disc_step(d, (3, 4), None)
        grown = grow_main_disc_step(d, (7, 3), 8)  # close the corner at 3
        assert 3 not in grown.boundary
        assert grown.tally == GluingTally(2, 1)

    def test_corner_close_on_fresh_star_is_rejected(self):
        # the very first step can never be a two-edge gluing: the corner
        # would become a 3-valent interior vertex
        d = closed_star_disc(5)
        with pytest.raises(GluingError):
            grow_main_disc_step(d, (2, 3), 4)

    def test_tally_tracks_boundary_and_interior(self):
        # V(boundary) = m + n_I - n_II and V(interior) = 1 + n_II
        for m in (5, 6):
            for disc in enumerate_main_discs(m, 8):
                tally = disc.tally
                assert len(disc.boundary) == m + tally.type_i - tally.type_ii
                assert disc.interior_count == 1 + tally.type_ii

    def test_main_discs_have_no_small_interior_valence(self):
        for disc in enumerate_main_discs(5, 8):
            assert disc.no_interior_three_valent
            assert disc.max_interior_valence <= 5


def brute_force_discs(max_vertices: int) -> set:
    """Reference disc enumeration: filter all triangle subsets."""
    found = set()
    triples = list(itertools.combinations(range(1, max_vertices + 1), 3))
    for r in range(1, len(triples) + 1):
        for subset in itertools.combinations(triples, r):
            labels = sorted({v for t in subset for v in t})
            if len(labels) > max_vertices:
                continue
            remap = {v: i + 1 for i, v in enumerate(labels)}
            tris = [tuple(sorted(remap[v] for v in t)) for t in subset]
            if len(set(tris)) != len(tris):
                continue
            t = Triangulation(tris)
            if validate(t).kind is not SurfaceKind.SURFACE_WITH_BOUNDARY:
                continue
            cycles = boundary_cycles(t.triangles)
            verts = {v for tri in t.triangles for v in tri}
            from surfenum.core import edge_triangles
            chi = len(verts) - len(edge_triangles(t.triangles)) + len(t.triangles)
            if chi != 1 or len(cycles) != 1:
                continue
            bverts = set(cycles[0])
            vals = Counter(v for tri in t.triangles for v in tri)
            if any(vals[v] < 4 for v in verts - bverts):
                continue
            found.add(minimal_code(t.triangles))
    return found


class TestDiscEnumeration:
    def test_matches_subset_brute_force_up_to_five_vertices(self):
        got = {d.triangles for d in enumerate_discs(SearchConfig(max_vertices=5))}
        assert got == brute_force_discs(5)

    def test_small_counts(self):
        by_v = Counter(d.vertex_count
                       for d in enumerate_discs(SearchConfig(max_vertices=4)))
        # one triangle, and two triangles sharing an edge
        assert by_v == {3: 1, 4: 1}


class TestAdmissibility:
    def test_mobius_strip_is_admissible(self, mobius):
        assert genus_surface_admissible(mobius, SearchConfig(max_vertices=6))

    def test_annulus_is_not_admissible(self, annulus):
        # planar, and not the single triangle
        assert not genus_surface_admissible(annulus, SearchConfig(max_vertices=11))

    def test_single_triangle_is_admissible(self):
        t = Triangulation([(1, 2, 3)])
        assert genus_surface_admissible(t, SearchConfig(max_vertices=7))

    def test_two_triangle_square_is_not(self):
        t = Triangulation([(1, 2, 3), (1, 3, 4)])
        assert not genus_surface_admissible(t, SearchConfig(max_vertices=7))

    def test_mobius_needs_enough_budget(self, mobius):
        # all five vertices are boundary with valence 3 <= N - 3 forces N >= 6
        assert not genus_surface_admissible(mobius, SearchConfig(max_vertices=5))

    def test_lower_bound_rows(self, mobius):
        g = GenusSurface.from_triangles(mobius.triangles)
        md = 4  # every Moebius vertex has degree 4
        assert main_disc_boundary_lower_bound(g, True, True, 6) == md + 1
        assert main_disc_boundary_lower_bound(g, True, False, 6) == md
        assert main_disc_boundary_lower_bound(g, False, True, 7) == md + 3 + 5 - 7
        assert main_disc_boundary_lower_bound(g, False, False, 7) == md + 2 + 5 - 7


class TestGenusSurfaces:
    def test_counts_up_to_seven_vertices(self):
        gs = enumerate_genus_surfaces(SearchConfig(max_vertices=7))
        counts = Counter((g.vertex_count, g.capped_class.name) for g in gs)
        assert counts == {
            (3, "S2"): 1, (5, "RP2"): 1, (6, "RP2"): 2, (6, "T2"): 1,
        }

    def test_mobius_is_the_five_vertex_candidate(self, mobius):
        gs = enumerate_genus_surfaces(SearchConfig(max_vertices=6))
        five = [g for g in gs if g.vertex_count == 5]
        assert len(five) == 1
        assert five[0].triangles == minimal_code(mobius.triangles)
        assert five[0].capped_class == PROJECTIVE_PLANE


class TestGluing:
    def test_mobius_plus_star_gives_projective_plane(self, mobius, rp2_six):
        g = GenusSurface.from_triangles(mobius.triangles)
        star = Disc.from_triangles(closed_star_disc(5).triangles)
        results = set()
        for reflect in (False, True):
            for offset in range(5):
                try:
                    t = glue_disc(g, g.boundary[0], star, offset, reflect)
                except GluingError:
                    continue
                results.add(minimal_code(t.triangles))
        assert results == {minimal_code(rp2_six.triangles)}

    def test_boundary_length_mismatch(self, mobius):
        g = GenusSurface.from_triangles(mobius.triangles)
        star4 = Disc.from_triangles(closed_star_disc(4).triangles)
        with pytest.raises(BoundaryLengthMismatchError):
            glue_disc(g, g.boundary[0], star4, 0, False)

    def test_unknown_cycle_rejected(self, mobius):
        g = GenusSurface.from_triangles(mobius.triangles)
        star = Disc.from_triangles(closed_star_disc(5).triangles)
        with pytest.raises(GluingError):
            glue_disc(g, (1, 2, 3, 4, 5), star, 0, False)


class TestSpheres:
    def test_sphere_roots_up_to_seven(self):
        spheres = enumerate_spheres(SearchConfig(max_vertices=7))
        by_v = Counter(t.vertex_count for t in spheres)
        assert by_v == {4: 1, 6: 1, 7: 1}
        assert all(classify(t) == SPHERE and is_root(t) for t in spheres)


class TestRootsAndNonRoots:
    def test_roots_match_oracle_at_eight(self):
        roots = enumerate_roots(SearchConfig(max_vertices=8))
        oracle = brute_force_enumerate(8)
        from surfenum.oracle import _code_is_root
        want = {key: {c for c in codes if _code_is_root(c)}
                for key, codes in oracle.codes.items()}
        want = {key: codes for key, codes in want.items() if codes}
        assert roots == want

    def test_nonroots_of_tetrahedron(self, tetra):
        grown = enumerate_nonroots(tetra, SearchConfig(max_vertices=6))
        by_v = Counter(t.vertex_count for t in grown)
        assert by_v == {5: 1, 6: 1}
        assert all(classify(t) == SPHERE and not is_root(t) for t in grown)

    def test_nonroots_requires_root(self, tetra):
        from surfenum.moves import t_move
        with pytest.raises(ValueError):
            enumerate_nonroots(t_move(tetra, (1, 2, 3)),
                               SearchConfig(max_vertices=7))


class TestCountsTable:
    def test_rows_sorted_and_totaled(self):
        table = CountsTable()
        table.add_root(6, PROJECTIVE_PLANE)
        table.add_root(6, SPHERE)
        table.add_nonroot(6, SPHERE)
        rows = table.rows()
        assert rows == [
            (6, SPHERE, 2, 1, 1),
            (6, PROJECTIVE_PLANE, 1, 1, 0),
        ]
        assert table.total_triangulations() == 3

    def test_merge(self):
        a, b = CountsTable(), CountsTable()
        a.add_root(4, SPHERE)
        b.add_nonroot(5, SPHERE)
        a.merge(b)
        assert a.get(5, SPHERE) == (1, 0, 1)


class TestValidateDecomposition:
    def test_octahedron_sphere_decomposition(self, octa):
        main = tuple(t for t in octa.triangles if t != (1, 2, 3))
        dec = Decomposition(genus_surface=((1, 2, 3),), main_disc=main)
        assert validate_decomposition(octa, dec)

    def test_main_disc_needs_max_valence_interior_vertex(self, octa):
        rest = tuple(t for t in octa.triangles if t != (1, 2, 3))
        dec = Decomposition(genus_surface=rest, main_disc=((1, 2, 3),))
        check = validate_decomposition(octa, dec)
        assert not check
        assert "maximal-valence" in check.reason

    def test_missing_triangles_rejected(self, octa):
        dec = Decomposition(genus_surface=((1, 2, 3),),
                            main_disc=octa.triangles[1:-1])
        check = validate_decomposition(octa, dec)
        assert not check
        assert "cover" in check.reason

    def test_overlapping_pieces_rejected(self, octa):
        dec = Decomposition(genus_surface=octa.triangles[:2],
                            main_disc=octa.triangles[1:])
        check = validate_decomposition(octa, dec)
        assert not check
        assert "share a triangle" in check.reason

    def test_foreign_triangles_rejected(self, octa):
        dec = Decomposition(genus_surface=((1, 2, 6),),
                            main_disc=octa.triangles)
        check = validate_decomposition(octa, dec)
        assert not check
        assert "sub-triangulation" in check.reason
