"""The listing pipeline: discs, spheres, genus-surfaces, gluings, non-roots.

Closed triangulations are listed root-first.  Spheres come from discs with
a 3-cycle boundary plus the missing triangle.  Every other root is cut into
a genus-surface (the piece carrying the topology) and one main disc holding
a maximal-valence vertex in its interior, plus at most one small extra disc
when at most 11 vertices are requested.  Genus-surface candidates are grown
exhaustively and pruned by the necessary conditions for minimal
decompositions; gluing the discs back in all possible ways recovers every
root, and repeated vertex-adding moves recover the non-roots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .canon import Code, minimal_code, state_key
from .core import (
    SPHERE,
    Edge,
    SurfaceClass,
    SurfaceKind,
    Triangle,
    Triangulation,
    boundary_cycles,
    boundary_edges,
    cap_boundary,
    classify,
    edge_triangles,
    link_shape,
    validate,
    vertex_triangles,
)
from .moves import is_root, t_move

TETRAHEDRON: Code = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))


class GluingError(ValueError):
    pass


class BoundaryLengthMismatchError(GluingError):
    pass


class DuplicateEdgeError(GluingError):
    pass


class NotASurfaceError(GluingError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    """Search bounds: vertex budget, the at-most-11 specialization, an
    optional target surface, and the worker count for sharded stages."""

    max_vertices: int
    specialized: bool | None = None
    surface: SurfaceClass | None = None
    workers: int = 1

    def __post_init__(self):
        if self.max_vertices < 3:
            raise ValueError("max_vertices must be at least 3")
        if self.specialized is None:
            object.__setattr__(self, "specialized", self.max_vertices <= 11)
        elif self.specialized and self.max_vertices > 11:
            raise ValueError("the specialization is only valid up to 11 vertices")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class GluingTally:
    """Counts of one-edge (fresh vertex) and two-edge (corner-closing)
    triangle gluings used to build a main disc."""

    type_i: int
    type_ii: int


@dataclass(frozen=True)
class Disc:
    """A triangulated disc: one boundary cycle, Euler characteristic 1."""

    triangles: Code
    boundary: tuple[int, ...]
    interior_count: int
    max_interior_valence: int | None
    no_interior_three_valent: bool
    tally: GluingTally | None = None

    @classmethod
    def from_triangles(cls, triangles: Iterable[Triangle],
                       tally: GluingTally | None = None) -> "Disc":
        tris = tuple(sorted(tuple(sorted(t)) for t in triangles))
        cycles = boundary_cycles(tris)
        if len(cycles) != 1:
            raise ValueError("a disc has exactly one boundary component")
        bverts = set(cycles[0])
        vals: dict[int, int] = {}
        for t in tris:
            for v in t:
                vals[v] = vals.get(v, 0) + 1
        interior = [v for v in vals if v not in bverts]
        return cls(
            triangles=tris,
            boundary=tuple(cycles[0]),
            interior_count=len(interior),
            max_interior_valence=max((vals[v] for v in interior), default=None),
            no_interior_three_valent=all(vals[v] >= 4 for v in interior),
            tally=tally,
        )

    @property
    def vertex_count(self) -> int:
        return len(self.boundary) + self.interior_count


@dataclass(frozen=True)
class GenusSurface:
    """The non-disc piece of a decomposition, with its boundary cycles and
    the closed surface obtained by capping them."""

    triangles: Code
    boundary: tuple[tuple[int, ...], ...]
    capped_class: SurfaceClass

    @classmethod
    def from_triangles(cls, triangles: Iterable[Triangle]) -> "GenusSurface":
        tris = tuple(sorted(tuple(sorted(t)) for t in triangles))
        cycles = tuple(tuple(c) for c in boundary_cycles(tris))
        t = Triangulation(tris)
        if len(tris) == 1:
            capped = SPHERE
        else:
            capped = classify(cap_boundary(t))
        return cls(triangles=tris, boundary=cycles, capped_class=capped)

    @property
    def vertex_count(self) -> int:
        return max(v for t in self.triangles for v in t)


@dataclass(frozen=True)
class Decomposition:
    """(genus-surface, main disc, extra discs), each a triangle subset of a
    common closed triangulation."""

    genus_surface: tuple[Triangle, ...]
    main_disc: tuple[Triangle, ...]
    extra_discs: tuple[tuple[Triangle, ...], ...] = ()


@dataclass(frozen=True)
class DecompositionCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class CountsTable:
    """(V, surface) -> (triangulations, roots, non-roots)."""

    def __init__(self):
        self._rows: dict[tuple[int, SurfaceClass], list[int]] = {}

    def add_root(self, v: int, cls: SurfaceClass, count: int = 1) -> None:
        self._rows.setdefault((v, cls), [0, 0])[0] += count

    def add_nonroot(self, v: int, cls: SurfaceClass, count: int = 1) -> None:
        self._rows.setdefault((v, cls), [0, 0])[1] += count

    def get(self, v: int, cls: SurfaceClass) -> tuple[int, int, int]:
        roots, nonroots = self._rows.get((v, cls), (0, 0))
        return roots + nonroots, roots, nonroots

    def rows(self) -> list[tuple[int, SurfaceClass, int, int, int]]:
        out = []
        for (v, cls), (roots, nonroots) in self._rows.items():
            out.append((v, cls, roots + nonroots, roots, nonroots))
        out.sort(key=lambda row: (row[0], row[1].sort_key()))
        return out

    def merge(self, other: "CountsTable") -> None:
        for (v, cls), (roots, nonroots) in other._rows.items():
            self.add_root(v, cls, roots)
            self.add_nonroot(v, cls, nonroots)

    def total_triangulations(self) -> int:
        return sum(r + n for r, n in self._rows.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountsTable):
            return NotImplemented
        mine = {k: tuple(v) for k, v in self._rows.items() if any(v)}
        theirs = {k: tuple(v) for k, v in other._rows.items() if any(v)}
        return mine == theirs

    def __repr__(self):
        return f"CountsTable({self.rows()!r})"


def _valences(tris: Iterable[Triangle]) -> dict[int, int]:
    vals: dict[int, int] = {}
    for t in tris:
        for v in t:
            vals[v] = vals.get(v, 0) + 1
    return vals


# --------------------------------------------------------------------------
# Step 1: triangulated discs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialDisc:
    """A disc under construction: triangle set, boundary cycle in order,
    and the tally of gluing types applied so far."""

    triangles: frozenset
    boundary: tuple[int, ...]
    tally: GluingTally

    @property
    def vertex_count(self) -> int:
        return max(v for t in self.triangles for v in t)


def closed_star_disc(valence: int) -> PartialDisc:
    """The closed star of an interior vertex of the given valence: the
    starting point of every main-disc construction."""
    if valence < 3:
        raise ValueError("an interior vertex has valence at least 3")
    hub = 1
    rim = list(range(2, valence + 2))
    tris = {tuple(sorted((hub, rim[i], rim[(i + 1) % valence])))
            for i in range(valence)}
    return PartialDisc(frozenset(tris), tuple(rim), GluingTally(0, 0))


def grow_main_disc_step(
    d: PartialDisc,
    edge: Edge,
    third: int | None,
    require_root: bool = True,
) -> PartialDisc:
    """Glue one triangle along a boundary edge of ``d``.

    ``third`` is None for a one-edge gluing with a fresh vertex (type I) or
    a boundary vertex adjacent along the boundary for a two-edge gluing
    closing that corner (type II).  ``require_root`` rejects a type II step
    that would finish an interior vertex with valence three.
    """
    a, b = edge
    bnd = d.boundary
    n = len(bnd)
    try:
        i = bnd.index(a)
    except ValueError:
        raise GluingError(f"vertex {a} not on the boundary") from None
    if bnd[(i + 1) % n] == b:
        pass
    elif bnd[(i - 1) % n] == b:
        a, b = b, a
        i = (i - 1) % n
    else:
        raise GluingError(f"edge {edge} not on the boundary")
    vals = _valences(d.triangles)

    if third is None:
        w = d.vertex_count + 1
        tris = set(d.triangles)
        tris.add(tuple(sorted((a, b, w))))
        boundary = bnd[: i + 1] + (w,) + bnd[i + 1:]
        tally = GluingTally(d.tally.type_i + 1, d.tally.type_ii)
        return PartialDisc(frozenset(tris), boundary, tally)

    # two-edge gluing: the corner at ``third`` is filled, making it interior
    if n <= 3:
        raise GluingError("closing a corner of a 3-cycle boundary would close the disc")
    if third == bnd[(i + 2) % n]:
        corner = b
        other = third
    elif third == bnd[(i - 1) % n]:
        corner = a
        other = third
    else:
        raise GluingError(
            f"vertex {third} is not adjacent to edge {edge} along the boundary")
    far = tuple(sorted((a if corner == b else b, other)))
    new_tri = tuple(sorted((a, b, other)))
    edge_map = edge_triangles(d.triangles)
    if far in edge_map:
        raise DuplicateEdgeError(f"edge {far} already present")
    if require_root and vals[corner] + 1 < 4:
        raise GluingError(
            f"corner {corner} would become a 3-valent interior vertex")
    tris = set(d.triangles)
    tris.add(new_tri)
    j = bnd.index(corner)
    boundary = bnd[:j] + bnd[j + 1:]
    tally = GluingTally(d.tally.type_i, d.tally.type_ii + 1)
    return PartialDisc(frozenset(tris), boundary, tally)


def _main_disc_children(d: PartialDisc, max_interior_valence: int,
                        max_vertices: int) -> list[PartialDisc]:
    m = max_interior_valence
    vals = _valences(d.triangles)
    bnd = d.boundary
    n = len(bnd)
    out = []
    for i in range(n):
        a, b = bnd[i], bnd[(i + 1) % n]
        # type I: both endpoints stay on the boundary
        if vals[a] + 1 <= m - 1 and vals[b] + 1 <= m - 1 and d.vertex_count < max_vertices:
            out.append(grow_main_disc_step(d, (a, b), None))
        # type II closing the corner at b
        c = bnd[(i + 2) % n]
        if n > 3 and 4 <= vals[b] + 1 <= m and vals[a] + 1 <= m - 1 and vals[c] + 1 <= m - 1:
            try:
                out.append(grow_main_disc_step(d, (a, b), c))
            except GluingError:
                pass
    return out


def enumerate_main_discs(max_interior_valence: int,
                         max_vertices: int) -> list[Disc]:
    """All discs usable as main discs: grown from the closed star of a
    vertex of the given valence, interior valences in [4, m] (except the
    bare 3-star), boundary valences at most m-1."""
    m = max_interior_valence
    start = closed_star_disc(m)
    if m == 3:
        # the bare star: the only disc whose interior vertex is 3-valent
        # ever needed (it closes up to the boundary of the tetrahedron)
        return [Disc.from_triangles(start.triangles, start.tally)]
    out = []
    seen = set()
    stack = [start]
    while stack:
        d = stack.pop()
        code = minimal_code(d.triangles)
        if code in seen:
            continue
        seen.add(code)
        out.append(Disc.from_triangles(code, d.tally))
        if d.vertex_count <= max_vertices:
            stack.extend(_main_disc_children(d, m, max_vertices))
    return out


def _disc_children(d: PartialDisc, max_vertices: int) -> list[PartialDisc]:
    # like main-disc growth but without valence caps (still no 3-valent
    # interior vertex)
    bnd = d.boundary
    n = len(bnd)
    out = []
    for i in range(n):
        a, b = bnd[i], bnd[(i + 1) % n]
        if d.vertex_count < max_vertices:
            out.append(grow_main_disc_step(d, (a, b), None))
        if n > 3:
            try:
                out.append(grow_main_disc_step(d, (a, b), bnd[(i + 2) % n]))
            except GluingError:
                pass
    return out


def enumerate_discs(cfg: SearchConfig) -> set[Disc]:
    """All triangulated discs with at most the configured number of
    vertices and no 3-valent interior vertex, up to isomorphism."""
    start = PartialDisc(frozenset({(1, 2, 3)}), (1, 2, 3), GluingTally(0, 0))
    out: dict[Code, Disc] = {}
    stack = [start]
    while stack:
        d = stack.pop()
        code = minimal_code(d.triangles)
        if code in out:
            continue
        out[code] = Disc.from_triangles(code)
        stack.extend(_disc_children(d, cfg.max_vertices))
    return set(out.values())


# --------------------------------------------------------------------------
# Step 2: spheres
# --------------------------------------------------------------------------

def enumerate_spheres(cfg: SearchConfig) -> set[Triangulation]:
    """All sphere roots with at most the configured vertex count: the
    boundary of the tetrahedron plus, for each main disc with a 3-cycle
    boundary, the disc with the missing triangle glued in."""
    found: set[Code] = set()
    if cfg.max_vertices >= 4 and (cfg.surface is None or cfg.surface == SPHERE):
        found.add(TETRAHEDRON)
        for m in range(4, cfg.max_vertices):
            for disc in enumerate_main_discs(m, cfg.max_vertices):
                if len(disc.boundary) != 3:
                    continue
                tris = set(disc.triangles)
                missing = tuple(sorted(disc.boundary))
                if missing in tris:
                    continue
                tris.add(missing)
                t = Triangulation(tris)
                if validate(t).kind is not SurfaceKind.CLOSED_SURFACE:
                    continue
                vals = _valences(tris)
                if min(vals.values()) < 4 or max(vals.values()) > m:
                    continue
                found.add(minimal_code(tris))
    return {Triangulation(code) for code in found}


# --------------------------------------------------------------------------
# Step 3: genus-surfaces
# --------------------------------------------------------------------------

def main_disc_boundary_lower_bound(
    g: GenusSurface, cond_a: bool, cond_b: bool, total_vertices: int
) -> int:
    """Lower bound on the main-disc boundary length for a non-sphere root.

    cond_a: the genus-surface has all but one of the root's vertices.
    cond_b: the maximal degree in the genus-surface is achieved on the
    boundary circle shared with the main disc.
    """
    vals_deg: dict[int, set[int]] = {}
    for t in g.triangles:
        for v in t:
            vals_deg.setdefault(v, set()).update(x for x in t if x != v)
    md = max(len(nbrs) for nbrs in vals_deg.values())
    slack = g.vertex_count - total_vertices
    if cond_a:
        return md + 1 if cond_b else md
    return md + 3 + slack if cond_b else md + 2 + slack


def _max_degree(tris: Iterable[Triangle]) -> tuple[dict[int, int], int]:
    nbrs: dict[int, set[int]] = {}
    for t in tris:
        a, b, c = t
        nbrs.setdefault(a, set()).update((b, c))
        nbrs.setdefault(b, set()).update((a, c))
        nbrs.setdefault(c, set()).update((a, b))
    degs = {v: len(s) for v, s in nbrs.items()}
    return degs, max(degs.values())


def genus_surface_admissible(g: GenusSurface | Triangulation,
                             cfg: SearchConfig) -> bool:
    """Necessary conditions for a candidate to be the genus-surface of a
    minimal decomposition of a root within the configured vertex budget."""
    if isinstance(g, Triangulation):
        g = GenusSurface.from_triangles(g.triangles)
    tris = g.triangles
    n_budget = cfg.max_vertices
    comps = g.boundary
    if not comps:
        return False
    if g.capped_class == SPHERE:
        # the only planar genus-surface of a minimal decomposition
        return len(tris) == 1
    bverts = {v for c in comps for v in c}
    vals = _valences(tris)
    # vertex budget (the root needs at least one more vertex)
    if g.vertex_count > n_budget - 1:
        return False
    # valence bounds, and at least one boundary vertex of valence >= 3
    for v, k in vals.items():
        if v in bverts:
            if not 2 <= k <= n_budget - 3:
                return False
        elif not 4 <= k <= n_budget - 2:
            return False
    if not any(vals[v] >= 3 for v in bverts):
        return False
    # the link of every boundary edge lies on the boundary
    edge_map = edge_triangles(tris)
    comp_of: dict[Edge, int] = {}
    for idx, c in enumerate(comps):
        n = len(c)
        for i in range(n):
            comp_of[tuple(sorted((c[i], c[(i + 1) % n])))] = idx
    for e, ts in edge_map.items():
        if len(ts) == 1:
            opposite = next(x for x in ts[0] if x not in e)
            if opposite not in bverts:
                return False
    # every triangle meets the boundary
    for t in tris:
        if not any(v in bverts for v in t):
            return False
    # no edge-adjacent triangle pair touching two different boundary comps
    def comps_touched(t: Triangle) -> set[int]:
        a, b, c = t
        out = set()
        for e in ((a, b), (a, c), (b, c)):
            if e in comp_of:
                out.add(comp_of[e])
        return out

    for e, ts in edge_map.items():
        if len(ts) == 2:
            c1, c2 = comps_touched(ts[0]), comps_touched(ts[1])
            if any(x != y for x in c1 for y in c2):
                return False
    # specialization: at most two boundary components, the extra one short
    if cfg.specialized:
        if len(comps) > 2:
            return False
        if len(comps) == 2 and not any(len(c) in (3, 4) for c in comps):
            return False
    # some component must be able to host a main disc of the required
    # minimum boundary length (checked with the weakest of the four cases)
    _degs, md = _max_degree(tris)
    bound = md + min(0, 2 + g.vertex_count - n_budget)
    if cfg.specialized and len(comps) == 2:
        hosts = [c for c, o in ((comps[0], comps[1]), (comps[1], comps[0]))
                 if len(o) in (3, 4)]
    else:
        hosts = list(comps)
    if not any(len(c) >= bound for c in hosts):
        return False
    return True


def _mult1_edges(tris: Iterable[Triangle]) -> set[Edge]:
    counts: dict[Edge, int] = {}
    for t in tris:
        a, b, c = t
        for e in ((a, b), (a, c), (b, c)):
            counts[e] = counts.get(e, 0) + 1
    return {e for e, k in counts.items() if k == 1}


def _frozen_cycles(frozen: frozenset) -> list[int] | None:
    """Lengths of complete cycles in the frozen-edge graph; None when some
    vertex already has three frozen edges (never completable)."""
    adj: dict[int, list[int]] = {}
    for a, b in frozen:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(nbrs) > 2 for nbrs in adj.values()):
        return None
    lengths = []
    seen: set[int] = set()
    for start in adj:
        if start in seen or len(adj[start]) != 2:
            continue
        cycle = [start]
        seen.add(start)
        prev, cur = None, start
        closed = False
        while True:
            nxts = [x for x in adj[cur] if x != prev]
            if not nxts:
                break
            nxt = nxts[0]
            if nxt == start:
                closed = True
                break
            if len(adj[nxt]) != 2:
                seen.add(nxt)
                break
            cycle.append(nxt)
            seen.add(nxt)
            prev, cur = cur, nxt
        if closed:
            lengths.append(len(cycle))
    return lengths


class _GenusSurfaceSearch:
    """Exhaustive growth of bounded-surface candidates with one declared
    decision per boundary edge: cover it with some triangle or freeze it
    into the final boundary."""

    def __init__(self, cfg: SearchConfig, max_surface_vertices: int | None = None):
        self.cfg = cfg
        n = cfg.max_vertices
        self.max_v = n - 1
        if max_surface_vertices is not None:
            self.max_v = min(self.max_v, max_surface_vertices)
        # a non-sphere root spends at least five triangles on the main disc
        self.max_t = n * (n - 1) // 3 - 5
        self.visited: set = set()
        self.emitted: dict[Code, GenusSurface] = {}

    def run(self, initial: Sequence[tuple[frozenset, frozenset]] | None = None):
        stack = list(initial) if initial is not None else [
            (frozenset({(1, 2, 3)}), frozenset())
        ]
        while stack:
            tris, frozen = stack.pop()
            key = state_key(tris, frozen)
            if key in self.visited:
                continue
            self.visited.add(key)
            children = self.children(tris, frozen)
            if children is None:
                self.emit(tris)
            else:
                stack.extend(children)
        return self

    def children(self, tris: frozenset, frozen: frozenset):
        open_edges = sorted(_mult1_edges(tris) - frozen)
        if not open_edges:
            return None
        e = open_edges[0]
        out = []
        frozen_degree = {}
        for x, y in frozen:
            frozen_degree[x] = frozen_degree.get(x, 0) + 1
            frozen_degree[y] = frozen_degree.get(y, 0) + 1
        vals = _valences(tris)
        a, b = e
        if self._freeze_ok(tris, frozen, e, vals, frozen_degree):
            out.append((tris, frozen | {e}))
        verts = sorted(vals)
        n_v = len(verts)
        cands = [x for x in verts if x not in e]
        if n_v < self.max_v:
            cands.append(n_v + 1)
        edge_map = edge_triangles(tris)
        by_vertex = vertex_triangles(tris)
        if len(tris) >= self.max_t:
            return out
        for x in cands:
            new_tri = tuple(sorted((a, b, x)))
            if new_tri in tris:
                continue
            ea, eb = tuple(sorted((a, x))), tuple(sorted((b, x)))
            if len(edge_map.get(ea, ())) > 1 or len(edge_map.get(eb, ())) > 1:
                continue
            if ea in frozen or eb in frozen:
                continue
            bad = False
            finished = {}
            for v in (a, b, x):
                # interior valence <= N-2, boundary valence <= N-3
                cap = (self.cfg.max_vertices - 3 if frozen_degree.get(v)
                       else self.cfg.max_vertices - 2)
                if vals.get(v, 0) + 1 > cap:
                    bad = True
                    break
                at_v = by_vertex.get(v, []) + [new_tri]
                shape = link_shape(at_v, v)
                if shape == "bad":
                    bad = True
                    break
                finished[v] = shape == "circle"
                if finished[v] and len(at_v) < 4:
                    # a finished interior vertex needs valence >= 4
                    bad = True
                    break
            if bad:
                continue
            # no triangle may end up with all three vertices interior
            def is_finished(v):
                if v in finished:
                    return finished[v]
                if frozen_degree.get(v):
                    return False
                return link_shape(by_vertex.get(v, []), v) == "circle"

            for t in itertools.chain(
                (u for v in (a, b, x) if v in by_vertex for u in by_vertex[v]),
                (new_tri,),
            ):
                if all(is_finished(v) for v in t):
                    bad = True
                    break
            if bad:
                continue
            out.append((tris | {new_tri}, frozen))
        return out

    def _freeze_ok(self, tris, frozen, e, vals, frozen_degree) -> bool:
        if len(frozen) + 1 > self.max_v:
            return False
        a, b = e
        cap = self.cfg.max_vertices - 3
        if vals[a] > cap or vals[b] > cap:
            return False
        if frozen_degree.get(a, 0) >= 2 or frozen_degree.get(b, 0) >= 2:
            return False
        # the opposite vertex of a boundary edge must end up on the boundary
        by_vertex = vertex_triangles(tris)
        tri = next(t for t in edge_triangles(tris)[e])
        w = next(x for x in tri if x not in e)
        if not frozen_degree.get(w) and link_shape(by_vertex[w], w) == "circle":
            return False
        if self.cfg.specialized:
            cycles = _frozen_cycles(frozen | {e})
            if cycles is None or len(cycles) > 2:
                return False
            if len(cycles) == 2 and not any(L in (3, 4) for L in cycles):
                return False
        return True

    def emit(self, tris: frozenset) -> None:
        if not _mult1_edges(tris):
            return  # closed up: not a genus-surface
        t = Triangulation(tris)
        if validate(t).kind is not SurfaceKind.SURFACE_WITH_BOUNDARY:
            return
        g = GenusSurface.from_triangles(tris)
        if not genus_surface_admissible(g, self.cfg):
            return
        if self.cfg.surface is not None and g.capped_class != self.cfg.surface:
            return
        code = minimal_code(tris)
        canonical = GenusSurface.from_triangles(code)
        self.emitted.setdefault(code, canonical)


def enumerate_genus_surfaces(
    cfg: SearchConfig, max_surface_vertices: int | None = None
) -> set[GenusSurface]:
    """All isomorphism classes of admissible genus-surface candidates with
    at most max_vertices - 1 vertices (a superset of the minimal
    genus-surfaces of all roots within the budget).  The optional cap
    restricts the candidates' own vertex count without tightening the
    admissibility budget."""
    search = _GenusSurfaceSearch(cfg, max_surface_vertices).run()
    return set(search.emitted.values())


# --------------------------------------------------------------------------
# Step 4: gluings
# --------------------------------------------------------------------------

def _glue_raw(
    base: frozenset,
    cycle: Sequence[int],
    disc: Disc,
    offset: int,
    reflect: bool,
) -> frozenset:
    L = len(cycle)
    if len(disc.boundary) != L:
        raise BoundaryLengthMismatchError(
            f"cycle length {L} vs disc boundary length {len(disc.boundary)}")
    if not 0 <= offset < L:
        raise GluingError(f"offset {offset} out of range")
    mapping: dict[int, int] = {}
    for i, v in enumerate(disc.boundary):
        j = (offset - i) % L if reflect else (offset + i) % L
        mapping[v] = cycle[j]
    fresh = max(v for t in base for v in t)
    for t in disc.triangles:
        for v in t:
            if v not in mapping:
                fresh += 1
                mapping[v] = fresh
    cycle_edges = {tuple(sorted((cycle[i], cycle[(i + 1) % L])))
                   for i in range(L)}
    base_edges = set(edge_triangles(base))
    new_tris = set()
    for t in disc.triangles:
        mapped = tuple(sorted(mapping[v] for v in t))
        if mapped in base:
            raise DuplicateEdgeError(f"triangle {mapped} already present")
        new_tris.add(mapped)
    for e in edge_triangles(disc.triangles):
        me = tuple(sorted((mapping[e[0]], mapping[e[1]])))
        if me in cycle_edges:
            continue
        if me in base_edges:
            raise DuplicateEdgeError(f"edge {me} already present")
    return base | new_tris


def glue_disc(
    g: GenusSurface,
    cycle: Sequence[int],
    d: Disc,
    offset: int,
    reflect: bool,
) -> Triangulation:
    """Identify the disc boundary with the given boundary cycle of the
    genus-surface under the chosen rotation/reflection."""
    cycle = tuple(cycle)
    if cycle not in g.boundary and tuple(reversed(cycle)) not in g.boundary:
        raise GluingError(f"{cycle} is not a boundary component")
    tris = _glue_raw(frozenset(g.triangles), cycle, d, offset, reflect)
    t = Triangulation(tris)
    report = validate(t)
    if len(g.boundary) == 1:
        if report.kind is not SurfaceKind.CLOSED_SURFACE:
            raise NotASurfaceError("gluing did not produce a closed surface")
    elif not report.is_surface:
        raise NotASurfaceError("gluing did not produce a surface")
    return t


_EXTRA_DISCS = {
    3: [Disc.from_triangles([(1, 2, 3)])],
    4: [Disc.from_triangles([(1, 2, 3), (1, 3, 4)])],
}


def _all_gluings(base: frozenset, cycle: Sequence[int],
                 disc: Disc) -> Iterator[frozenset]:
    L = len(cycle)
    for reflect in (False, True):
        for offset in range(L):
            try:
                yield _glue_raw(base, cycle, disc, offset, reflect)
            except GluingError:
                continue


def _roots_from_genus_surface(
    g: GenusSurface,
    cfg: SearchConfig,
    discs_by_key: dict[tuple[int, int, int], list[Disc]],
) -> set[tuple[int, SurfaceClass, Code]]:
    """All roots arising from one genus-surface, as (V, class, code)."""
    n_budget = cfg.max_vertices
    found: set[tuple[int, SurfaceClass, Code]] = set()
    comps = g.boundary
    degs, md = _max_degree(g.triangles)
    for main_idx, main_cycle in enumerate(comps):
        others = [c for k, c in enumerate(comps) if k != main_idx]
        if cfg.specialized:
            if len(others) > 1 or (others and len(others[0]) not in (3, 4)):
                continue
        # glue the extra discs first (cheap, and independent of the main disc)
        bases = [frozenset(g.triangles)]
        feasible = True
        for other in others:
            if cfg.specialized:
                extra_options = _EXTRA_DISCS.get(len(other), [])
            else:
                extra_options = discs_by_key.get(("any", len(other)), [])
            next_bases = []
            for base in bases:
                seen_local = set()
                for disc in extra_options:
                    for glued in _all_gluings(base, other, disc):
                        if glued not in seen_local:
                            seen_local.add(glued)
                            next_bases.append(glued)
            bases = next_bases
            if not bases:
                feasible = False
                break
        if not feasible:
            continue
        cond_b = any(degs[v] == md for v in main_cycle)
        max_interior = n_budget - g.vertex_count
        for interior_count in range(1, max_interior + 1):
            total_vertices = g.vertex_count + interior_count
            bound = main_disc_boundary_lower_bound(
                g, interior_count == 1, cond_b, total_vertices)
            if len(main_cycle) < bound:
                continue
            for m in range(5, total_vertices):
                for disc in discs_by_key.get((m, len(main_cycle), interior_count), []):
                    for base in bases:
                        for glued in _all_gluings(base, main_cycle, disc):
                            t = Triangulation(glued)
                            if validate(t).kind is not SurfaceKind.CLOSED_SURFACE:
                                continue
                            vals = _valences(glued)
                            if min(vals.values()) < 4 or max(vals.values()) > m:
                                continue
                            cls = classify(t)
                            if cls != g.capped_class:
                                raise AssertionError(
                                    "glued surface class differs from capped genus-surface")
                            found.add((total_vertices, cls, minimal_code(glued)))
    return found


def _index_main_discs(cfg: SearchConfig) -> dict[tuple, list[Disc]]:
    """Main discs indexed by (interior max valence, boundary length,
    interior vertex count); in the general mode also all discs by
    ('any', boundary length) for the extra-disc role."""
    index: dict[tuple, list[Disc]] = {}
    for m in range(5, cfg.max_vertices):
        for disc in enumerate_main_discs(m, cfg.max_vertices):
            key = (m, len(disc.boundary), disc.interior_count)
            index.setdefault(key, []).append(disc)
    if not cfg.specialized:
        for disc in enumerate_discs(cfg):
            index.setdefault(("any", len(disc.boundary)), []).append(disc)
    return index


def enumerate_roots(cfg: SearchConfig) -> dict[tuple[int, SurfaceClass], set[Code]]:
    """All roots within the vertex budget, keyed by (V, surface class)."""
    roots: dict[tuple[int, SurfaceClass], set[Code]] = {}

    def add(v: int, cls: SurfaceClass, code: Code) -> None:
        roots.setdefault((v, cls), set()).add(code)

    for t in enumerate_spheres(cfg):
        add(t.vertex_count, SPHERE, t.triangles)
    genus_surfaces = [g for g in enumerate_genus_surfaces(cfg)
                      if g.capped_class != SPHERE]
    if genus_surfaces:
        discs_by_key = _index_main_discs(cfg)
        results = _map_maybe_parallel(
            _roots_from_genus_surface_task,
            [(g, cfg, discs_by_key) for g in genus_surfaces],
            cfg.workers,
        )
        for batch in results:
            for v, cls, code in batch:
                add(v, cls, code)
    return roots


def _roots_from_genus_surface_task(args):
    return _roots_from_genus_surface(*args)


# --------------------------------------------------------------------------
# Step 5: non-roots
# --------------------------------------------------------------------------

def enumerate_nonroots(root: Triangulation, cfg: SearchConfig) -> set[Triangulation]:
    """Every non-root within the vertex budget whose root is ``root``,
    found by breadth-first vertex-adding moves."""
    if not is_root(root):
        raise ValueError("enumerate_nonroots needs a root")
    found: set[Code] = set()
    frontier: set[Code] = {minimal_code(root.triangles)}
    while frontier:
        nxt: set[Code] = set()
        for code in frontier:
            t = Triangulation(code)
            if t.vertex_count >= cfg.max_vertices:
                continue
            for tri in t.triangles:
                moved = t_move(t, tri)
                new_code = minimal_code(moved.triangles)
                if new_code not in found:
                    found.add(new_code)
                    nxt.add(new_code)
        frontier = nxt
    return {Triangulation(code) for code in found}


def _nonroots_task(args):
    code, cfg = args
    return code, {t.triangles
                  for t in enumerate_nonroots(Triangulation(code), cfg)}


# --------------------------------------------------------------------------
# Full pipeline
# --------------------------------------------------------------------------

@dataclass
class EnumerationResult:
    counts: CountsTable
    roots: dict[tuple[int, SurfaceClass], set[Code]]
    nonroots: dict[tuple[int, SurfaceClass], set[Code]]

    def all_codes(self) -> dict[tuple[int, SurfaceClass], set[Code]]:
        out: dict[tuple[int, SurfaceClass], set[Code]] = {}
        for store in (self.roots, self.nonroots):
            for key, codes in store.items():
                out.setdefault(key, set()).update(codes)
        return out


def enumerate_all(cfg: SearchConfig) -> EnumerationResult:
    """Roots, then non-roots by repeated vertex-adding moves; returns the
    counts table plus the canonical triangle lists behind it."""
    roots = enumerate_roots(cfg)
    nonroots: dict[tuple[int, SurfaceClass], set[Code]] = {}
    tasks = []
    class_of: dict[Code, SurfaceClass] = {}
    for (v, cls), codes in roots.items():
        for code in codes:
            if v < cfg.max_vertices:
                tasks.append((code, cfg))
                class_of[code] = cls
    for code, grown in _map_maybe_parallel(_nonroots_task, tasks, cfg.workers):
        cls = class_of[code]
        for nr in grown:
            v = max(x for t in nr for x in t)
            nonroots.setdefault((v, cls), set()).add(nr)
    counts = CountsTable()
    for (v, cls), codes in roots.items():
        counts.add_root(v, cls, len(codes))
    for (v, cls), codes in nonroots.items():
        counts.add_nonroot(v, cls, len(codes))
    return EnumerationResult(counts=counts, roots=roots, nonroots=nonroots)


def _map_maybe_parallel(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    import concurrent.futures

    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# --------------------------------------------------------------------------
# Decomposition validation
# --------------------------------------------------------------------------

def _piece_simplices(tris: Iterable[Triangle]):
    verts = {v for t in tris for v in t}
    edges = set(edge_triangles(tris))
    return verts, edges


def _is_disc(tris: tuple[Triangle, ...]) -> bool:
    try:
        t = Triangulation(_relabel_contiguous(tris))
    except ValueError:
        return False
    if validate(t).kind is not SurfaceKind.SURFACE_WITH_BOUNDARY:
        return False
    verts = {v for tri in t.triangles for v in tri}
    chi = len(verts) - len(edge_triangles(t.triangles)) + len(t.triangles)
    return chi == 1 and len(boundary_cycles(t.triangles)) == 1


def _relabel_contiguous(tris: Iterable[Triangle]) -> list[Triangle]:
    labels = sorted({v for t in tris for v in t})
    remap = {v: i + 1 for i, v in enumerate(labels)}
    return [tuple(sorted(remap[v] for v in t)) for t in tris]


def validate_decomposition(t: Triangulation, dec: Decomposition) -> DecompositionCheck:
    """Check every clause of the decomposition definition against ``t``."""
    pieces = [tuple(sorted(tuple(sorted(x)) for x in p))
              for p in (dec.genus_surface, dec.main_disc, *dec.extra_discs)]
    all_tris = set(t.triangles)
    for p in pieces:
        if not p:
            return DecompositionCheck(False, "empty piece")
        if not set(p) <= all_tris:
            return DecompositionCheck(False, "piece not a sub-triangulation")
    union = set().union(*(set(p) for p in pieces))
    if union != all_tris:
        return DecompositionCheck(False, "pieces do not cover the triangulation")
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if set(pieces[i]) & set(pieces[j]):
                return DecompositionCheck(False, "pieces share a triangle")
            vi, ei = _piece_simplices(pieces[i])
            vj, ej = _piece_simplices(pieces[j])
            common_v, common_e = vi & vj, ei & ej
            if not common_v and not common_e:
                continue
            # the intersection must be a triangulated circle
            adj: dict[int, list[int]] = {v: [] for v in common_v}
            for a, b in common_e:
                if a not in common_v or b not in common_v:
                    return DecompositionCheck(False, "dangling shared edge")
                adj[a].append(b)
                adj[b].append(a)
            if any(len(nbrs) != 2 for nbrs in adj.values()):
                return DecompositionCheck(False, "shared part is not a circle")
            start = next(iter(common_v))
            seen = {start}
            prev, cur = None, start
            while True:
                nxt = next(x for x in adj[cur] if x != prev)
                if nxt == start:
                    break
                seen.add(nxt)
                prev, cur = cur, nxt
            if seen != common_v:
                return DecompositionCheck(False, "shared part is not one circle")
    for p, name in [(pieces[1], "main disc")] + [
        (p, "extra disc") for p in pieces[2:]
    ]:
        if not _is_disc(p):
            return DecompositionCheck(False, f"{name} is not a disc")
    # the main disc holds a maximal-valence vertex in its interior
    vals = _valences(t.triangles)
    mv = max(vals.values())
    main = pieces[1]
    interior = {v for tri in main for v in tri} - {
        v for c in boundary_cycles(main) for v in c
    }
    if not any(vals[v] == mv for v in interior):
        return DecompositionCheck(
            False, "main disc has no maximal-valence interior vertex")
    return DecompositionCheck(True)
