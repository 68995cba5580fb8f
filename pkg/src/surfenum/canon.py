"""Mixed-lexicographic canonical labeling and isomorphism testing.

A triangle list is compared "mixed-lexicographically": smaller means the
first vertex has greater valence, with ties broken by plain lexicographic
comparison of the sorted triple lists.  The canonical form of a complex is
the minimal relabeled triangle list under this order; two complexes are
isomorphic exactly when their canonical forms coincide.

The minimum is found by a backtracking search that emits triangles in
ascending order: label 1 ranges over the maximal-valence vertices, and each
further label is created the first time the next smallest triangle needs an
unlabeled vertex.  Ties (several triangles, or several vertex assignments,
realizing the same next triple) are branched on and pruned against the best
list found so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Triangle, Triangulation, normalize_triangles

Code = tuple[Triangle, ...]


def _valences(tris: Sequence[Triangle]) -> dict[int, int]:
    val: dict[int, int] = {}
    for t in tris:
        for v in t:
            val[v] = val.get(v, 0) + 1
    return val


def _search(
    tris: Sequence[Triangle],
    seed: int,
    best: list,  # [code or None]; None while a strictly better code is pending
    witnesses: list | None,  # collects all optimal labelings when not None
) -> None:
    # Invariant: on entry the emitted prefix equals best[0][:pos] whenever
    # best[0] is not None.  A branch that realizes a strictly smaller triple
    # therefore discards best[0]; its first completion re-establishes it.

    def recurse(label, next_label, remaining, emitted):
        if not remaining:
            if best[0] is None:
                best[0] = tuple(emitted)
                if witnesses is not None:
                    witnesses.clear()
                    witnesses.append(dict(label))
            elif witnesses is not None:
                # by the invariant this completion ties with best[0]
                witnesses.append(dict(label))
            return
        pos = len(emitted)
        get = label.get
        # smallest realizable next triple: known labels then fresh ones
        min_key = None
        candidates = []
        for t in remaining:
            a, b, c = t
            ks = []
            la = get(a)
            if la is not None:
                ks.append(la)
            lb = get(b)
            if lb is not None:
                ks.append(lb)
            lc = get(c)
            if lc is not None:
                ks.append(lc)
            ks.sort()
            # fresh labels are consecutive from next_label and exceed all
            # assigned labels, so appending keeps the triple sorted
            fresh = next_label
            while len(ks) < 3:
                ks.append(fresh)
                fresh += 1
            key = (ks[0], ks[1], ks[2])
            if min_key is None or key < min_key:
                min_key = key
                candidates = [t]
            elif key == min_key:
                candidates.append(t)
        if best[0] is not None:
            ref = best[0][pos]
            if min_key > ref:
                return
            if min_key < ref:
                best[0] = None
                if witnesses is not None:
                    witnesses.clear()
        emitted.append(min_key)
        for t in candidates:
            missing = [x for x in t if x not in label]
            rest = [u for u in remaining if u != t]
            if len(missing) <= 1:
                orders = [tuple(missing)]
            elif len(missing) == 2:
                orders = [(missing[0], missing[1]), (missing[1], missing[0])]
            else:
                a, b, c = missing
                orders = [
                    (a, b, c), (a, c, b), (b, a, c),
                    (b, c, a), (c, a, b), (c, b, a),
                ]
            for order in orders:
                for i, x in enumerate(order):
                    label[x] = next_label + i
                recurse(label, next_label + len(missing), rest, emitted)
                for x in order:
                    del label[x]
        emitted.pop()

    recurse({seed: 1}, 2, list(tris), [])


def minimal_code(tris: Iterable[Triangle], with_witnesses: bool = False):
    """Mixed-lex minimal relabeled triangle list of a raw triangle
    collection; optionally also every labeling achieving it."""
    tris = normalize_triangles(tris)
    val = _valences(tris)
    max_val = max(val.values())
    best: list = [None]
    witnesses: list | None = [] if with_witnesses else None
    for v in sorted(x for x, k in val.items() if k == max_val):
        _search(tris, v, best, witnesses)
    if with_witnesses:
        return best[0], witnesses
    return best[0]


@dataclass(frozen=True)
class CanonicalForm:
    """The mixed-lex minimal triangle list; equality means isomorphism."""

    triangles: Code

    def triangulation(self) -> Triangulation:
        return Triangulation(self.triangles)

    def __lt__(self, other: "CanonicalForm") -> bool:
        return mixed_lex_compare(self.triangles, other.triangles) < 0


def canonical_form(t: Triangulation) -> CanonicalForm:
    return CanonicalForm(minimal_code(t.triangles))


def canonical_witness(t: Triangulation) -> dict[int, int]:
    """One relabeling (old -> new) realizing the canonical form."""
    _code, wits = minimal_code(t.triangles, with_witnesses=True)
    return wits[0]


def is_isomorphic(a: Triangulation, b: Triangulation) -> bool:
    return minimal_code(a.triangles) == minimal_code(b.triangles)


def mixed_lex_compare(a: Sequence[Triangle], b: Sequence[Triangle]) -> int:
    """-1, 0 or 1; both lists must be normalized (triples and list sorted)."""
    val_a = sum(1 for t in a if 1 in t)
    val_b = sum(1 for t in b if 1 in t)
    if val_a != val_b:
        return -1 if val_a > val_b else 1
    ta, tb = tuple(a), tuple(b)
    if ta == tb:
        return 0
    return -1 if ta < tb else 1


def state_key(tris: Iterable[Triangle], marked_edges: Iterable[tuple[int, int]]):
    """Canonical key for a complex together with a set of marked edges,
    invariant under relabeling (automorphisms are minimized over)."""
    code, wits = minimal_code(tris, with_witnesses=True)
    marked = list(marked_edges)
    best_marked = None
    for w in wits:
        image = tuple(sorted(tuple(sorted((w[a], w[b]))) for a, b in marked))
        if best_marked is None or image < best_marked:
            best_marked = image
    return code, best_marked
