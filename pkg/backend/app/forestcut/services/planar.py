"""
Plane triangulations given by rotation systems.

Faces are traced combinatorially: after the dart u->v comes v->succ_v(u),
where succ_v is the cyclic successor in rot[v]. No coordinates and no
planarity testing; embeddings come from triangle lists, rotation files or
the stacking generator.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.forestcut.exceptions import (
    BadParametersError,
    EdgeNotOnChosenFaceError,
    MalformedRotationError,
    NotAFaceError,
    NotSphereEmbeddingError,
    UnknownFixtureError,
)
from app.forestcut.services.graph_core import Graph, VertexSet, build_graph, mask_of, remove_edge

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]


@dataclass(frozen=True)
class RotationSystem:
    graph: Graph
    rot: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if len(self.rot) != self.graph.order:
            raise MalformedRotationError(
                "one rotation list per vertex is required",
                details={"order": self.graph.order, "lists": len(self.rot)},
            )
        for v, cyclic in enumerate(self.rot):
            if len(set(cyclic)) != len(cyclic) or mask_of(cyclic) != self.graph.adj[v]:
                raise MalformedRotationError(
                    f"rotation at {v} is not a permutation of its neighbours",
                    details={"vertex": v, "rotation": list(cyclic)},
                )

    @cached_property
    def _position(self) -> Tuple[Dict[int, int], ...]:
        return tuple({w: i for i, w in enumerate(cyclic)} for cyclic in self.rot)

    def succ(self, v: int, u: int) -> int:
        """Neighbour following u in the cyclic order around v."""
        cyclic = self.rot[v]
        return cyclic[(self._position[v][u] + 1) % len(cyclic)]

    def pred(self, v: int, u: int) -> int:
        cyclic = self.rot[v]
        return cyclic[(self._position[v][u] - 1) % len(cyclic)]

    @classmethod
    def from_triangles(cls, triangles: Iterable[Sequence[int]], order: Optional[int] = None) -> "RotationSystem":
        """
        Rotations from consistently oriented triangles: face (a, b, c) means
        the darts a->b, b->c, c->a, so succ_b(a) = c, succ_c(b) = a and
        succ_a(c) = b.
        """
        triangles = [tuple(t) for t in triangles]
        if order is None:
            order = 1 + max((v for t in triangles for v in t), default=-1)
        successor: List[Dict[int, int]] = [dict() for _ in range(order)]
        edges = set()
        for tri in triangles:
            if len(tri) != 3 or len(set(tri)) != 3:
                raise MalformedRotationError("faces must be triangles", details={"face": list(tri)})
            a, b, c = tri
            for v, u, w in ((b, a, c), (c, b, a), (a, c, b)):
                if u in successor[v]:
                    raise MalformedRotationError(
                        f"dart {u}->{v} lies on two faces", details={"face": list(tri)}
                    )
                successor[v][u] = w
            edges.update({tuple(sorted(p)) for p in ((a, b), (b, c), (a, c))})
        graph = build_graph(order, sorted(edges))
        rot = []
        for v in range(order):
            if not successor[v]:
                rot.append(())
                continue
            start = min(successor[v])
            cyclic = [start]
            nxt = successor[v].get(start)
            while nxt is not None and nxt != start and len(cyclic) <= len(successor[v]):
                cyclic.append(nxt)
                nxt = successor[v].get(nxt)
            if nxt != start or len(cyclic) != len(successor[v]):
                raise MalformedRotationError(
                    f"faces around {v} do not close into a single wheel", details={"vertex": v}
                )
            rot.append(tuple(cyclic))
        return cls(graph, tuple(rot))


def faces(rotation: RotationSystem) -> List[Face]:
    """Directed face cycles; darts are visited by tail ascending, then rotation order."""
    seen = set()
    traced: List[Face] = []
    for u in range(rotation.graph.order):
        for v in rotation.rot[u]:
            if (u, v) in seen:
                continue
            cycle = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cycle.append(a)
                a, b = b, rotation.succ(b, a)
            traced.append(tuple(cycle))
    graph = rotation.graph
    euler = graph.order - graph.size + len(traced)
    if euler != 2:
        raise NotSphereEmbeddingError(
            f"n - m + f = {euler}, expected 2",
            details={"order": graph.order, "size": graph.size, "faces": len(traced)},
        )
    return traced


def is_plane_triangulation(rotation: RotationSystem) -> bool:
    try:
        traced = faces(rotation)
    except NotSphereEmbeddingError:
        return False
    return rotation.graph.order >= 3 and all(len(f) == 3 for f in traced)


def faces_containing_edge(rotation: RotationSystem, u: int, v: int) -> List[Face]:
    return [f for f in faces(rotation) if u in f and v in f and _has_side(f, u, v)]


def _has_side(face: Face, u: int, v: int) -> bool:
    k = len(face)
    return any({face[i], face[(i + 1) % k]} == {u, v} for i in range(k))


def _normalized(face: Sequence[int]) -> Face:
    i = face.index(min(face))
    return tuple(face[i:]) + tuple(face[:i])


def match_face(traced: List[Face], triple: Sequence[int]) -> Optional[Face]:
    """The traced face equal to ``triple`` as a directed cycle, else as a vertex set."""
    wanted = _normalized(tuple(triple))
    for f in traced:
        if _normalized(f) == wanted:
            return f
    for f in traced:
        if len(f) == len(wanted) and set(f) == set(wanted):
            return f
    return None


@dataclass(frozen=True)
class PlaneTriangulation:
    embedding: RotationSystem
    outer_face: Face

    def __post_init__(self):
        if not is_plane_triangulation(self.embedding):
            raise NotSphereEmbeddingError(
                "embedding is not a plane triangulation", details={"order": self.graph.order}
            )
        if match_face(self.face_list, self.outer_face) is None:
            raise NotAFaceError("outer face is not a face", details={"face": list(self.outer_face)})

    @property
    def graph(self) -> Graph:
        return self.embedding.graph

    @cached_property
    def face_list(self) -> List[Face]:
        return faces(self.embedding)

    @classmethod
    def from_triangles(cls, triangles: Sequence[Sequence[int]], outer: Optional[Sequence[int]] = None) -> "PlaneTriangulation":
        embedding = RotationSystem.from_triangles(triangles)
        return cls(embedding, tuple(outer if outer is not None else triangles[0]))


def stack_vertex(triangulation: PlaneTriangulation, face: Sequence[int]) -> PlaneTriangulation:
    """Insert a new vertex (id n) inside ``face``, joined to its three corners."""
    matched = match_face(triangulation.face_list, face)
    if matched is None or len(matched) != 3:
        raise NotAFaceError(f"{tuple(face)} is not a face", details={"face": list(face)})
    f0, f1, f2 = matched
    old = triangulation.embedding
    w = old.graph.order
    rot = [list(cyclic) for cyclic in old.rot]
    for host, after in ((f1, f0), (f2, f1), (f0, f2)):
        rot[host].insert(rot[host].index(after) + 1, w)
    rot.append([f0, f2, f1])
    graph = build_graph(w + 1, old.graph.edges() + [(f0, w), (f1, w), (f2, w)])
    outer = triangulation.outer_face
    if match_face(triangulation.face_list, outer) == matched:
        outer = (f0, f1, w)
    return PlaneTriangulation(RotationSystem(graph, tuple(tuple(c) for c in rot)), tuple(outer))


def random_stacked_triangulation(n: int, seed: int) -> PlaneTriangulation:
    """Stack from K4, choosing each face with ``random.Random(seed)``; same inputs give the same triangulation."""
    if n < 4:
        raise BadParametersError("stacked triangulations start at K4", details={"n": n})
    rng = random.Random(seed)
    triangulation = embedding_fixture("k4")
    while triangulation.graph.order < n:
        triangulation = stack_vertex(triangulation, rng.choice(triangulation.face_list))
    logger.debug("stacked_triangulation", extra={"n": n, "seed": seed})
    return triangulation


# ---------------------------------------------------------------- forest cut of T - xy

@dataclass(frozen=True)
class PlanarCutTrace:
    """Intermediate objects of the constructive forest cut of T - xy."""

    cut: VertexSet
    face: Face
    apex: int
    fan: Tuple[int, ...]
    path: Tuple[int, ...]
    interior: VertexSet


def _choose_face(triangulation: PlaneTriangulation, x: int, y: int, face: Optional[Sequence[int]]) -> Face:
    if face is not None:
        matched = match_face(triangulation.face_list, face)
        if matched is None:
            raise NotAFaceError(f"{tuple(face)} is not a face", details={"face": list(face)})
        if not _has_side(matched, x, y):
            raise EdgeNotOnChosenFaceError(
                f"edge {x}-{y} is not on face {matched}", details={"edge": [x, y], "face": list(matched)}
            )
        return matched
    outer = match_face(triangulation.face_list, triangulation.outer_face)
    if outer is not None and _has_side(outer, x, y):
        return outer
    for f in triangulation.face_list:
        if _has_side(f, x, y):
            return f
    raise EdgeNotOnChosenFaceError(f"{x}-{y} is not an edge", details={"edge": [x, y]})


def _fan(embedding: RotationSystem, z: int, x: int, y: int) -> Tuple[int, ...]:
    """Neighbours of z from x to y, the long way round."""
    cyclic = embedding.rot[z]
    start = cyclic.index(x)
    walk = cyclic[start:] + cyclic[:start]
    if len(walk) > 2 and walk[1] == y:
        walk = (walk[0],) + tuple(reversed(walk[1:]))
    return tuple(walk)


def _increasing_path(graph: Graph, fan: Tuple[int, ...]) -> Tuple[int, ...]:
    """
    Shortest x..y path through the fan with strictly increasing indices,
    never using the edge xy; the lexicographically smallest such index
    sequence.
    """
    last = len(fan) - 1
    hops: List[Optional[int]] = [None] * len(fan)
    hops[last] = 0
    for i in range(last - 1, -1, -1):
        options = [
            hops[j]
            for j in range(i + 1, len(fan))
            if hops[j] is not None and graph.has_edge(fan[i], fan[j]) and not (i == 0 and j == last)
        ]
        hops[i] = 1 + min(options) if options else None
    path = [0]
    while path[-1] != last:
        i = path[-1]
        path.append(next(
            j for j in range(i + 1, len(fan))
            if hops[j] is not None and hops[j] == hops[i] - 1
            and graph.has_edge(fan[i], fan[j]) and not (i == 0 and j == last)
        ))
    return tuple(fan[i] for i in path)


def _interior(triangulation: PlaneTriangulation, cycle: Tuple[int, ...], apex: int) -> int:
    """Vertices off the cycle whose faces are unreachable from the apex side."""
    k = len(cycle)
    barrier = {frozenset((cycle[i], cycle[(i + 1) % k])) for i in range(k)}
    face_list = triangulation.face_list
    by_edge: Dict[frozenset, List[int]] = {}
    for idx, f in enumerate(face_list):
        for i in range(len(f)):
            by_edge.setdefault(frozenset((f[i], f[(i + 1) % len(f)])), []).append(idx)
    start = next(idx for idx, f in enumerate(face_list) if apex in f)
    reached = {start}
    queue = deque([start])
    while queue:
        f = face_list[queue.popleft()]
        for i in range(len(f)):
            side = frozenset((f[i], f[(i + 1) % len(f)]))
            if side in barrier:
                continue
            for other in by_edge[side]:
                if other not in reached:
                    reached.add(other)
                    queue.append(other)
    outside = mask_of(v for idx in reached for v in face_list[idx])
    return triangulation.graph.full_mask & ~outside & ~mask_of(cycle)


def planar_cut_trace(triangulation: PlaneTriangulation, edge: Tuple[int, int], face: Optional[Sequence[int]] = None) -> PlanarCutTrace:
    x, y = edge
    graph = triangulation.graph
    if not (0 <= x < graph.order and 0 <= y < graph.order) or not graph.has_edge(x, y):
        raise EdgeNotOnChosenFaceError(f"{x}-{y} is not an edge", details={"edge": [x, y]})
    chosen = _choose_face(triangulation, x, y, face)
    z = next(v for v in chosen if v not in (x, y))
    fan = _fan(triangulation.embedding, z, x, y)
    if len(fan) == 2:
        return PlanarCutTrace(VertexSet.of([z]), chosen, z, fan, fan, VertexSet(0))
    path = _increasing_path(graph, fan)
    interior = _interior(triangulation, path, z)
    cut = VertexSet.of(path) if interior else VertexSet.of([z, path[1]])
    return PlanarCutTrace(cut, chosen, z, fan, path, VertexSet(interior))


def prop1_forest_cut(triangulation: PlaneTriangulation, edge: Tuple[int, int], face: Optional[Sequence[int]] = None) -> VertexSet:
    """A forest cut of T - xy, for any edge xy of a plane triangulation."""
    return planar_cut_trace(triangulation, edge, face).cut


def forest_cut_of_planar_subgraph(triangulation: PlaneTriangulation, deleted_edges: Sequence[Tuple[int, int]]) -> Tuple[Graph, VertexSet]:
    """
    T minus a nonempty set of its edges, with a forest cut: the cut of
    T - xy for the first deleted edge survives further edge deletions.
    """
    if not deleted_edges:
        raise BadParametersError("at least one edge must be deleted")
    graph = triangulation.graph
    for u, v in deleted_edges:
        if not (0 <= u < graph.order and 0 <= v < graph.order) or not triangulation.graph.has_edge(u, v):
            raise BadParametersError(f"{u}-{v} is not an edge", details={"edge": [u, v]})
        graph = remove_edge(graph, u, v)
    return graph, prop1_forest_cut(triangulation, tuple(deleted_edges[0]))


# ---------------------------------------------------------------- rotation files

def parse_rotation_file(text: str) -> RotationSystem:
    """Line 1 ``n``, then ``v: w1 w2 ...`` per vertex (counterclockwise, 0-based)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedRotationError("empty rotation file")
    try:
        order = int(lines[0])
    except ValueError as exc:
        raise MalformedRotationError("first line must be the vertex count") from exc
    if len(lines) - 1 != order:
        raise MalformedRotationError(
            f"expected {order} rotation lines, found {len(lines) - 1}",
            details={"expected": order, "found": len(lines) - 1},
        )
    rot: List[Optional[Tuple[int, ...]]] = [None] * order
    for line in lines[1:]:
        head, sep, tail = line.partition(":")
        if not sep:
            raise MalformedRotationError("missing ':'", details={"line": line})
        try:
            v = int(head)
            cyclic = tuple(int(tok) for tok in tail.split())
        except ValueError as exc:
            raise MalformedRotationError("non-integer vertex id", details={"line": line}) from exc
        if not 0 <= v < order or rot[v] is not None:
            raise MalformedRotationError(f"bad or repeated vertex {v}", details={"line": line})
        if any(not 0 <= w < order or w == v for w in cyclic):
            raise MalformedRotationError("neighbour out of range", details={"line": line})
        rot[v] = cyclic
    edges = {tuple(sorted((v, w))) for v, cyclic in enumerate(rot) for w in cyclic}
    for a, b in edges:
        if b not in rot[a] or a not in rot[b]:
            raise MalformedRotationError(f"edge {a}-{b} listed on one side only", details={"edge": [a, b]})
    return RotationSystem(build_graph(order, sorted(edges)), tuple(rot))


def write_rotation_file(rotation: RotationSystem) -> str:
    lines = [str(rotation.graph.order)]
    lines += [f"{v}: {' '.join(map(str, cyclic))}" for v, cyclic in enumerate(rotation.rot)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- fixture embeddings

def _octahedron_triangles() -> List[Face]:
    ring = [1, 2, 3, 4]
    top = [(0, ring[i], ring[(i + 1) % 4]) for i in range(4)]
    bottom = [(5, ring[(i + 1) % 4], ring[i]) for i in range(4)]
    return top + bottom


def _icosahedron_triangles() -> List[Face]:
    top, bottom = 0, 11
    upper = [1 + i for i in range(5)]
    lower = [6 + i for i in range(5)]
    triangles: List[Face] = []
    for i in range(5):
        j = (i + 1) % 5
        triangles += [
            (top, upper[i], upper[j]),
            (upper[i], lower[i], upper[j]),
            (upper[j], lower[i], lower[j]),
            (bottom, lower[j], lower[i]),
        ]
    return triangles


EMBEDDING_TRIANGLES = {
    "k3": lambda: [(0, 1, 2), (0, 2, 1)],
    "k4": lambda: [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)],
    "octahedron": _octahedron_triangles,
    "icosahedron": _icosahedron_triangles,
}


def embedding_fixture(name: str) -> PlaneTriangulation:
    try:
        triangles = EMBEDDING_TRIANGLES[name]()
    except KeyError:
        raise UnknownFixtureError(
            f"no embedding named {name!r}", details={"known": sorted(EMBEDDING_TRIANGLES)}
        ) from None
    return PlaneTriangulation.from_triangles(triangles)
