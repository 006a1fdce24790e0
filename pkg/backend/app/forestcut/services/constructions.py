"""
Extremal families, clique gluing and named fixture graphs.

Numbering is fixed: cycle vertices first, universal vertex last, so every
construction is reproducible bit for bit.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, List, Sequence, Tuple

from app.forestcut.domain.schemas import GlueSpec
from app.forestcut.exceptions import BadParametersError, KTooSmallError, NotACliqueError, UnknownFixtureError
from app.forestcut.services.graph_core import Graph, build_graph, induced_edge_count, mask_of
from app.forestcut.services.planar import (
    PlaneTriangulation,
    RotationSystem,
    embedding_fixture,
    faces,
    match_face,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def _cycle(vertices: Sequence[int]) -> List[Edge]:
    k = len(vertices)
    return [(vertices[i], vertices[(i + 1) % k]) for i in range(k)]


def _universal(hub: int, others: Sequence[int]) -> List[Edge]:
    return [(v, hub) for v in others]


def cycle_diagonals_universal(k: int) -> Graph:
    """C_2k with the k long diagonals x_i x_{i+k}, plus a universal vertex 2k."""
    if k < 2:
        raise KTooSmallError("k must be at least 2", details={"k": k})
    ring = list(range(2 * k))
    edges = _cycle(ring) + [(i, i + k) for i in range(k)] + _universal(2 * k, ring)
    return build_graph(2 * k + 1, edges)


def k3_band_cycle(n: int, c: int) -> Graph:
    """K_{3,n-3} (small side 0,1,2) plus a c-cycle on vertices 3..c+2."""
    if n <= 6 or not 3 <= c < n - 3:
        raise BadParametersError(
            "need n > 6 and 3 <= c < n - 3", details={"n": n, "c": c}
        )
    edges = [(a, b) for a in range(3) for b in range(3, n)]
    edges += _cycle(list(range(3, 3 + c)))
    return build_graph(n, edges)


def conjecture2_family(k: int) -> Graph:
    """
    Cycle u_0 .. u_{3k+2}, chords u_{3i} u_{3i+2} for i = 0..k, and a
    universal vertex 3k+3. Order 3k+4, size 7k+7.
    """
    if k < 1:
        raise KTooSmallError("k must be at least 1", details={"k": k})
    ring = list(range(3 * k + 3))
    edges = _cycle(ring) + [(3 * i, 3 * i + 2) for i in range(k + 1)] + _universal(3 * k + 3, ring)
    return build_graph(3 * k + 4, edges)


# ---------------------------------------------------------------- gluing

def _require_clique(graph: Graph, clique: Sequence[int], label: str) -> None:
    if any(v >= graph.order for v in clique):
        raise NotACliqueError(f"{label} has a vertex outside the graph", details={"clique": list(clique)})
    t = len(clique)
    if induced_edge_count(graph, mask_of(clique)) != t * (t - 1) // 2:
        raise NotACliqueError(f"{label} does not induce a complete graph", details={"clique": list(clique)})


def _glue_map(g1: Graph, g2: Graph, spec: GlueSpec) -> List[int]:
    """New id for every vertex of g2; unshared vertices follow g1's, in order."""
    shared = dict(zip(spec.clique_b, spec.clique_a))
    mapping = []
    fresh = g1.order
    for v in range(g2.order):
        if v in shared:
            mapping.append(shared[v])
        else:
            mapping.append(fresh)
            fresh += 1
    return mapping


def clique_glue(g1: Graph, g2: Graph, spec: GlueSpec) -> Graph:
    """Identify clique_b[i] of g2 with clique_a[i] of g1; shared edges are merged."""
    _require_clique(g1, spec.clique_a, "clique_a")
    _require_clique(g2, spec.clique_b, "clique_b")
    mapping = _glue_map(g1, g2, spec)
    edges = set(g1.edges())
    for u, v in g2.edges():
        a, b = mapping[u], mapping[v]
        edges.add((min(a, b), max(a, b)))
    return build_graph(g1.order + g2.order - spec.size, sorted(edges))


def glue_triangulations(t1: PlaneTriangulation, t2: PlaneTriangulation, face_a: Sequence[int], face_b: Sequence[int]) -> PlaneTriangulation:
    """
    Glue two plane triangulations along a face of each; the result is a
    plane triangulation on n1 + n2 - 3 vertices. face_b is laid onto face_a
    with the opposite orientation.
    """
    a = match_face(t1.face_list, face_a)
    b = match_face(t2.face_list, face_b)
    if a is None or b is None or len(a) != 3 or len(b) != 3:
        raise NotACliqueError("gluing needs a triangular face on each side", details={"face_a": list(face_a), "face_b": list(face_b)})
    spec = GlueSpec(clique_a=(a[0], a[2], a[1]), clique_b=b)
    graph = clique_glue(t1.graph, t2.graph, spec)
    mapping = _glue_map(t1.graph, t2.graph, spec)
    inverse = {new: old for old, new in enumerate(mapping)}
    rot: List[Tuple[int, ...]] = list(t1.embedding.rot) + [()] * (graph.order - t1.graph.order)
    for old, new in enumerate(mapping):
        if new >= t1.graph.order:
            rot[new] = tuple(mapping[w] for w in t2.embedding.rot[old])
    for i, v in enumerate(a):
        p, q = a[(i + 1) % 3], a[i - 1]
        first = t1.embedding.rot[v]
        first = first[first.index(p):] + first[:first.index(p)]
        second = tuple(mapping[w] for w in t2.embedding.rot[inverse[v]])
        second = second[second.index(q):] + second[:second.index(q)]
        rot[v] = first + second[1:-1]
    outer = t1.outer_face if match_face(t1.face_list, t1.outer_face) != a else None
    embedding = RotationSystem(graph, tuple(rot))
    if outer is None:
        return PlaneTriangulation(embedding, faces(embedding)[0])
    return PlaneTriangulation(embedding, outer)


# ---------------------------------------------------------------- fixtures

def _one_based(pairs: Sequence[Edge]) -> List[Edge]:
    return [(u - 1, v - 1) for u, v in pairs]


def _k(n: int) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def _prism() -> Graph:
    return build_graph(6, _cycle([0, 1, 2]) + _cycle([3, 4, 5]) + [(i, i + 3) for i in range(3)])


FIXTURES: Dict[str, Callable[[], Graph]] = {
    "k3": lambda: _k(3),
    "k4": lambda: _k(4),
    "k5_minus_edge": lambda: build_graph(5, [e for e in _k(5).edges() if e != (3, 4)]),
    "k33": lambda: build_graph(6, [(a, b) for a in range(3) for b in range(3, 6)]),
    "prism": _prism,
    "octahedron": lambda: embedding_fixture("octahedron").graph,
    "icosahedron": lambda: embedding_fixture("icosahedron").graph,
    "wheel5": lambda: build_graph(5, _cycle([0, 1, 2, 3]) + _universal(4, range(4))),
    # small connected census graphs, edge lists 1-based
    "fig1_a": lambda: build_graph(6, _one_based(
        [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4), (2, 5), (3, 6)])),
    "fig1_b": lambda: build_graph(6, _one_based(
        [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 4), (2, 6), (6, 3), (5, 6)])),
    "fig1_c": lambda: build_graph(7, _one_based(
        [(1, 2), (2, 3), (3, 4), (4, 1), (3, 6), (6, 4), (3, 7), (7, 2), (1, 5), (5, 6), (5, 7)])),
    "fig1_d": lambda: build_graph(7, _one_based(
        [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 7), (7, 5), (4, 7), (7, 6), (6, 3), (2, 6)])),
}


def fixture(name: str) -> Graph:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise UnknownFixtureError(f"unknown fixture {name!r}", details={"known": sorted(FIXTURES)}) from None
