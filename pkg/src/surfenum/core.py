"""Simplicial surface representation, validation and topological classification.

A triangulation is stored as its triangle list: a sorted tuple of sorted
vertex triples with labels 1..V.  All operations are pure; indices are
rebuilt from the triangle list rather than patched incrementally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

Triangle = tuple[int, int, int]
Edge = tuple[int, int]


def normalize_triangles(triangles: Iterable[Iterable[int]]) -> tuple[Triangle, ...]:
    """Sort every triple and the whole list."""
    return tuple(sorted(tuple(sorted(t)) for t in triangles))


class Triangulation:
    """An immutable 2-dimensional simplicial complex given by its triangles.

    Vertex labels must be the contiguous range 1..V.  The structural
    invariants (distinct labels per triple, no duplicate triangles) are
    enforced here; whether the complex is a surface is decided by
    :func:`validate`.
    """

    __slots__ = ("triangles",)

    def __init__(self, triangles: Iterable[Iterable[int]]):
        tris = normalize_triangles(triangles)
        if not tris:
            raise ValueError("a triangulation needs at least one triangle")
        seen = set()
        labels = set()
        for t in tris:
            if len(set(t)) != 3:
                raise ValueError(f"degenerate triangle {t}")
            if t in seen:
                raise ValueError(f"duplicate triangle {t}")
            if t[0] < 1:
                raise ValueError(f"vertex labels must be positive, got {t}")
            seen.add(t)
            labels.update(t)
        if labels != set(range(1, len(labels) + 1)):
            raise ValueError("vertex labels must be contiguous 1..V")
        object.__setattr__(self, "triangles", tris)

    def __setattr__(self, name, value):
        raise AttributeError("Triangulation is immutable")

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.triangles == other.triangles

    def __hash__(self):
        return hash(self.triangles)

    def __repr__(self):
        return f"Triangulation({list(self.triangles)!r})"

    @property
    def vertex_count(self) -> int:
        return max(v for t in self.triangles for v in t)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def edges(self) -> list[Edge]:
        return sorted(edge_triangles(self.triangles))


def edge_triangles(tris: Iterable[Triangle]) -> dict[Edge, list[Triangle]]:
    """Edge -> incident triangles."""
    out: dict[Edge, list[Triangle]] = {}
    for t in tris:
        a, b, c = t
        for e in ((a, b), (a, c), (b, c)):
            out.setdefault(e, []).append(t)
    return out


def vertex_triangles(tris: Iterable[Triangle]) -> dict[int, list[Triangle]]:
    """Vertex -> incident triangles."""
    out: dict[int, list[Triangle]] = {}
    for t in tris:
        for v in t:
            out.setdefault(v, []).append(t)
    return out


def link_graph(tris_at_v: Iterable[Triangle], v: int) -> dict[int, list[int]]:
    """Adjacency of the link of ``v``: one link edge per triangle at ``v``."""
    adj: dict[int, list[int]] = {}
    for t in tris_at_v:
        a, b = (x for x in t if x != v)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def link_shape(tris_at_v: Iterable[Triangle], v: int) -> str:
    """Classify the link of ``v``: 'circle', 'interval', 'paths' or 'bad'.

    'paths' means two or more disjoint simple paths (a pinch for a finished
    surface but an acceptable intermediate state during growth searches).
    """
    adj = link_graph(tris_at_v, v)
    if any(len(nbrs) > 2 or len(set(nbrs)) != len(nbrs) for nbrs in adj.values()):
        return "bad"
    endpoints = sum(1 for nbrs in adj.values() if len(nbrs) == 1)
    # count connected components
    seen: set[int] = set()
    components = 0
    for start in adj:
        if start in seen:
            continue
        components += 1
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    if endpoints == 0:
        return "circle" if components == 1 else "bad"
    if endpoints == 2 * components:
        return "interval" if components == 1 else "paths"
    return "bad"


class SurfaceKind(Enum):
    CLOSED_SURFACE = "ClosedSurface"
    SURFACE_WITH_BOUNDARY = "SurfaceWithBoundary"
    NOT_A_SURFACE = "NotASurface"


@dataclass(frozen=True)
class ValidationReport:
    kind: SurfaceKind
    offending_vertices: tuple[int, ...] = ()

    @property
    def is_surface(self) -> bool:
        return self.kind is not SurfaceKind.NOT_A_SURFACE


def _connected(tris: tuple[Triangle, ...]) -> bool:
    by_edge = edge_triangles(tris)
    seen = {tris[0]}
    stack = [tris[0]]
    while stack:
        t = stack.pop()
        a, b, c = t
        for e in ((a, b), (a, c), (b, c)):
            for u in by_edge[e]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
    if len(seen) == len(tris):
        return True
    # fall back to vertex connectivity (complexes joined at a vertex only
    # are edge-disconnected but still fail the link test, so reporting them
    # as connected here keeps the offending vertex diagnosis meaningful)
    verts = vertex_triangles(tris)
    reached = set(tris[0])
    frontier = list(tris[0])
    while frontier:
        v = frontier.pop()
        for t in verts[v]:
            for w in t:
                if w not in reached:
                    reached.add(w)
                    frontier.append(w)
    return len(reached) == len(verts)


def validate(t: Triangulation) -> ValidationReport:
    """Decide whether the complex is a closed surface, a surface with
    boundary, or not a surface at all (with the offending vertices)."""
    tris = t.triangles
    offending: set[int] = set()
    for e, ts in edge_triangles(tris).items():
        if len(ts) > 2:
            offending.update(e)
    by_vertex = vertex_triangles(tris)
    has_boundary = False
    for v, ts in by_vertex.items():
        shape = link_shape(ts, v)
        if shape in ("bad", "paths"):
            offending.add(v)
        elif shape == "interval":
            has_boundary = True
    if offending:
        return ValidationReport(SurfaceKind.NOT_A_SURFACE, tuple(sorted(offending)))
    if not _connected(tris):
        return ValidationReport(SurfaceKind.NOT_A_SURFACE, ())
    if has_boundary:
        return ValidationReport(SurfaceKind.SURFACE_WITH_BOUNDARY)
    return ValidationReport(SurfaceKind.CLOSED_SURFACE)


def euler_characteristic(t: Triangulation) -> int:
    """V - E + T."""
    tris = t.triangles
    verts = {v for tri in tris for v in tri}
    return len(verts) - len(edge_triangles(tris)) + len(tris)


@dataclass(frozen=True, order=True)
class SurfaceClass:
    """Homeomorphism type of a closed surface: orientability and genus."""

    orientable: bool
    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.orientable and self.genus == 0:
            raise ValueError("a non-orientable surface has genus >= 1")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    @property
    def name(self) -> str:
        if self.orientable:
            return {0: "S2", 1: "T2"}.get(self.genus, f"S+{self.genus}")
        return {1: "RP2", 2: "K2"}.get(self.genus, f"S-{self.genus}")

    def __str__(self) -> str:
        return self.name

    @classmethod
    def from_name(cls, name: str) -> "SurfaceClass":
        fixed = {"S2": (True, 0), "T2": (True, 1), "RP2": (False, 1), "K2": (False, 2)}
        if name in fixed:
            return cls(*fixed[name])
        if len(name) > 2 and name[0] == "S" and name[1] in "+-" and name[2:].isdigit():
            return cls(name[1] == "+", int(name[2:]))
        raise ValueError(f"unknown surface name {name!r}")

    def sort_key(self) -> tuple[int, int]:
        # orientable-first, then genus
        return (0 if self.orientable else 1, self.genus)


SPHERE = SurfaceClass(True, 0)
TORUS = SurfaceClass(True, 1)
PROJECTIVE_PLANE = SurfaceClass(False, 1)
KLEIN_BOTTLE = SurfaceClass(False, 2)


def orientable_triangles(tris: tuple[Triangle, ...]) -> bool:
    """Propagate a coherent orientation across shared edges; a conflict
    means the (connected, closed or bounded) surface is non-orientable."""
    by_edge = edge_triangles(tris)
    # orientation of a triangle = a chosen cyclic order of its vertices
    orient: dict[Triangle, tuple[int, int, int]] = {}
    for start in tris:
        if start in orient:
            continue
        orient[start] = start
        stack = [start]
        while stack:
            t = stack.pop()
            x, y, z = orient[t]
            directed = {(x, y), (y, z), (z, x)}
            a, b, c = t
            for e in ((a, b), (a, c), (b, c)):
                for u in by_edge[e]:
                    if u is t or u == t:
                        continue
                    # u must carry edge e in the opposite direction
                    want = e if (e[1], e[0]) in directed else (e[1], e[0])
                    w = next(v for v in u if v not in e)
                    target = (want[0], want[1], w)
                    if u in orient:
                        ox, oy, oz = orient[u]
                        have = {(ox, oy), (oy, oz), (oz, ox)}
                        if (want[0], want[1]) not in have:
                            return False
                    else:
                        orient[u] = target
                        stack.append(u)
    return True


def classify(t: Triangulation) -> SurfaceClass:
    """Surface type of a closed triangulation from orientability and chi."""
    report = validate(t)
    if report.kind is not SurfaceKind.CLOSED_SURFACE:
        raise ValueError(f"classify needs a closed surface, got {report.kind.value}")
    chi = euler_characteristic(t)
    if orientable_triangles(t.triangles):
        if chi % 2 != 0:
            raise AssertionError("orientable surface with odd Euler characteristic")
        return SurfaceClass(True, (2 - chi) // 2)
    return SurfaceClass(False, 2 - chi)


def heawood_min_vertices(s: SurfaceClass) -> int:
    """Minimal vertex count of a triangulation of ``s``: the ceiling of
    (7 + sqrt(49 - 24 chi)) / 2, plus one for the three exceptional
    surfaces (orientable genus 2, the Klein bottle, non-orientable genus 3).
    """
    chi = s.euler_characteristic
    disc = 49 - 24 * chi
    root = math.isqrt(disc)
    if root * root == disc:
        bound = -((7 + root) // -2)
    else:
        bound = (7 + root) // 2 + 1
    exceptional = s in (SurfaceClass(True, 2), KLEIN_BOTTLE, SurfaceClass(False, 3))
    return bound + (1 if exceptional else 0)


def boundary_edges(tris: Iterable[Triangle]) -> list[Edge]:
    return sorted(e for e, ts in edge_triangles(tris).items() if len(ts) == 1)


def boundary_components(t: Triangulation) -> list[list[int]]:
    """Boundary cycles, each as a list of vertices in cyclic order.

    Requires the complex to be a surface (possibly with boundary); the
    boundary graph is then a disjoint union of simple cycles.
    """
    report = validate(t)
    if not report.is_surface:
        raise ValueError("boundary_components needs a surface")
    return boundary_cycles(t.triangles)


def boundary_cycles(tris: Iterable[Triangle]) -> list[list[int]]:
    """Boundary cycles of a raw triangle collection (no validity check)."""
    adj: dict[int, list[int]] = {}
    for a, b in boundary_edges(tris):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    cycles: list[list[int]] = []
    seen: set[int] = set()
    for start in sorted(adj):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = next(x for x in adj[cur] if x != prev)
            if nxt == start:
                break
            cycle.append(nxt)
            seen.add(nxt)
            prev, cur = cur, nxt
        cycles.append(cycle)
    return cycles


def cap_boundary(t: Triangulation) -> Triangulation:
    """Cone each boundary cycle to a fresh vertex, yielding a closed surface.

    Only the homeomorphism type of the result is meaningful; this is how a
    bounded piece is classified by the closed surface it caps to.
    """
    report = validate(t)
    if report.kind is not SurfaceKind.SURFACE_WITH_BOUNDARY:
        raise ValueError("cap_boundary needs a surface with boundary")
    tris = list(t.triangles)
    apex = t.vertex_count
    for cycle in boundary_cycles(t.triangles):
        apex += 1
        n = len(cycle)
        for i in range(n):
            tris.append((cycle[i], cycle[(i + 1) % n], apex))
    return Triangulation(tris)


@dataclass(frozen=True)
class VertexInfo:
    valence: int
    degree: int
    interior: bool


@dataclass
class VertexStats:
    per_vertex: Mapping[int, VertexInfo]
    max_valence: int
    max_degree: int


def vertex_stats(t: Triangulation) -> VertexStats:
    """Per-vertex valence (triangle count), degree (neighbour count) and
    interior flag, plus the maxima over all vertices."""
    report = validate(t)
    if not report.is_surface:
        raise ValueError("vertex_stats needs a surface")
    boundary_verts = {v for e in boundary_edges(t.triangles) for v in e}
    info: dict[int, VertexInfo] = {}
    for v, ts in vertex_triangles(t.triangles).items():
        neighbours = {x for tri in ts for x in tri if x != v}
        info[v] = VertexInfo(
            valence=len(ts), degree=len(neighbours), interior=v not in boundary_verts
        )
    return VertexStats(
        per_vertex=info,
        max_valence=max(i.valence for i in info.values()),
        max_degree=max(i.degree for i in info.values()),
    )
