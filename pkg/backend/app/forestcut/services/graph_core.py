"""
Immutable simple graphs on at most 128 vertices.

Adjacency is stored as one Python int per vertex, used as a bit set
(bit v set in adj[u] <=> uv is an edge). Every other service builds on the
primitives here: connected components under a vertex mask, cut and forest
predicates, brute-force connectivity, the degree profile, and the graph6 /
edge-list codecs.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import networkx as nx

from app.forestcut.exceptions import (
    DisconnectedInputError,
    LoopEdgeError,
    MalformedEdgeListError,
    MalformedGraph6Error,
    OrderTooLargeError,
    OutOfRangeError,
    UnsupportedOrderError,
)

logger = logging.getLogger(__name__)

MAX_ORDER = 128
GRAPH6_MAX_ORDER = 62


def iter_bits(mask: int) -> Iterator[int]:
    """Vertex ids set in ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class VertexSet:
    """Bit set of vertex ids; the currency for cuts, separators and neighbourhoods."""

    bits: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        return cls(mask_of(vertices))

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & ~other.bits)

    def with_vertex(self, v: int) -> "VertexSet":
        return VertexSet(self.bits | (1 << v))

    def without_vertex(self, v: int) -> "VertexSet":
        return VertexSet(self.bits & ~(1 << v))

    def issubset(self, other: "VertexSet") -> bool:
        return self.bits & ~other.bits == 0

    def to_tuple(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def __repr__(self) -> str:
        return f"VertexSet({{{', '.join(map(str, self))}}})"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``adj[v]`` is the bit set N_G(v)."""

    order: int
    adj: Tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.adj) != self.order:
            raise OutOfRangeError(
                "adjacency length does not match order",
                details={"order": self.order, "rows": len(self.adj)},
            )

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @property
    def vertices(self) -> VertexSet:
        return VertexSet(self.full_mask)

    @property
    def size(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> Tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adj)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.adj[v])

    def closed_neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.adj[v] | (1 << v))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, size={self.size})"


def build_graph(order: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from an edge list, deduplicating repeated pairs."""
    if order > MAX_ORDER:
        raise OrderTooLargeError(
            f"order {order} exceeds {MAX_ORDER}", details={"order": order}
        )
    if order < 1:
        raise OutOfRangeError("order must be at least 1", details={"order": order})
    rows = [0] * order
    for pair in edges:
        u, v = pair
        if u == v:
            raise LoopEdgeError(f"loop at vertex {u}", details={"edge": (u, v)})
        if not (0 <= u < order and 0 <= v < order):
            raise OutOfRangeError(
                f"edge ({u}, {v}) outside 0..{order - 1}", details={"edge": (u, v), "order": order}
            )
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(order, tuple(rows))


def _require_subset(graph: Graph, vertex_set: VertexSet) -> None:
    if vertex_set.bits & ~graph.full_mask:
        raise OutOfRangeError(
            "vertex set not contained in V(G)",
            details={"vertices": vertex_set.to_tuple(), "order": graph.order},
        )


# ---------------------------------------------------------------- traversal

def components(graph: Graph, allowed: int) -> List[int]:
    """Connected components of G[allowed] as masks, ordered by lowest vertex."""
    comps: List[int] = []
    adj = graph.adj
    remaining = allowed
    while remaining:
        comp = frontier = remaining & -remaining
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= adj[v]
            frontier = reach & remaining & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    return comps


def is_connected(graph: Graph) -> bool:
    return len(components(graph, graph.full_mask)) == 1


def is_complete(graph: Graph) -> bool:
    full = graph.full_mask
    return all(row | (1 << v) == full for v, row in enumerate(graph.adj))


def universal_vertices(graph: Graph) -> List[int]:
    full = graph.full_mask
    return [v for v, row in enumerate(graph.adj) if row | (1 << v) == full]


def require_connected(graph: Graph) -> None:
    if not is_connected(graph):
        raise DisconnectedInputError(
            "cut predicates need a connected graph", details={"order": graph.order}
        )


def induced_subgraph(graph: Graph, vertices: VertexSet) -> Tuple[Graph, Tuple[int, ...]]:
    """G[vertices] relabelled 0..k-1; also returns new-id -> old-id."""
    _require_subset(graph, vertices)
    old_ids = vertices.to_tuple()
    position = {old: new for new, old in enumerate(old_ids)}
    rows = []
    for old in old_ids:
        row = 0
        for w in iter_bits(graph.adj[old] & vertices.bits):
            row |= 1 << position[w]
        rows.append(row)
    return Graph(len(old_ids), tuple(rows)), old_ids


def remove_vertex(graph: Graph, v: int) -> Tuple[Graph, Tuple[int, ...]]:
    return induced_subgraph(graph, graph.vertices.without_vertex(v))


def remove_edge(graph: Graph, u: int, v: int) -> Graph:
    rows = list(graph.adj)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    return Graph(graph.order, tuple(rows))


def relabel(graph: Graph, permutation: Sequence[int]) -> Graph:
    """Graph with vertex v renamed to permutation[v]."""
    rows = [0] * graph.order
    for v, row in enumerate(graph.adj):
        rows[permutation[v]] = mask_of(permutation[w] for w in iter_bits(row))
    return Graph(graph.order, tuple(rows))


# ---------------------------------------------------------------- predicates

def induced_edge_count(graph: Graph, mask: int) -> int:
    return sum((graph.adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def induced_is_forest(graph: Graph, vertex_set: VertexSet) -> bool:
    """G[S] is acyclic: |E(G[S])| = |S| - #components(G[S])."""
    _require_subset(graph, vertex_set)
    mask = vertex_set.bits
    if mask.bit_count() <= 2:
        return True
    return induced_edge_count(graph, mask) == mask.bit_count() - len(components(graph, mask))


def induced_is_independent(graph: Graph, vertex_set: VertexSet) -> bool:
    _require_subset(graph, vertex_set)
    mask = vertex_set.bits
    return all(not (graph.adj[v] & mask) for v in iter_bits(mask))


def is_vertex_cut(graph: Graph, vertex_set: VertexSet) -> bool:
    """G - S has at least two components. An empty remainder is not a cut."""
    require_connected(graph)
    _require_subset(graph, vertex_set)
    rest = graph.full_mask & ~vertex_set.bits
    if not rest:
        return False
    return len(components(graph, rest)) >= 2


def vertex_connectivity_at_least(graph: Graph, k: int) -> bool:
    """
    Brute-force k-connectivity: complete of order >= k+1, or no set of
    fewer than k vertices separates G. Meant for small k (<= 5).
    """
    if not is_connected(graph):
        return False
    if is_complete(graph):
        return graph.order >= k + 1
    full = graph.full_mask
    for size in range(1, min(k, graph.order)):
        for subset in itertools.combinations(range(graph.order), size):
            rest = full & ~mask_of(subset)
            if rest and len(components(graph, rest)) >= 2:
                return False
    return True


# ---------------------------------------------------------------- degrees

def degree_sum(graph: Graph, vertex_set: VertexSet) -> int:
    """d_G(S): sum of the degrees of the vertices in S."""
    return sum(graph.degree(v) for v in vertex_set)


@dataclass(frozen=True)
class DegreeProfile:
    """
    Degree counts n_i (i = 4..n-1) and the split of degree-4 vertices by
    the largest degree j among their neighbours (n_4^j, j = 5..n-1), with
    V_4^6 refined into ' (exactly one neighbour of degree 6) and ''.
    """

    order: int
    n_i: Dict[int, int]
    n_4_j: Dict[int, int]
    n_4_6_prime: int
    n_4_6_doubleprime: int
    partition_valid: bool

    def count(self, i: int) -> int:
        return self.n_i.get(i, 0)

    def count_4(self, j: int) -> int:
        return self.n_4_j.get(j, 0)


def degree_profile(graph: Graph) -> DegreeProfile:
    n = graph.order
    degrees = graph.degrees()
    n_i = {i: 0 for i in range(4, n)}
    n_4_j = {j: 0 for j in range(5, n)}
    prime = doubleprime = 0
    partition_valid = True
    for v, d in enumerate(degrees):
        if d >= 4:
            n_i[d] += 1
        if d != 4:
            continue
        neighbour_degrees = [degrees[w] for w in iter_bits(graph.adj[v])]
        j = max(neighbour_degrees)
        if j < 5:
            partition_valid = False
            continue
        n_4_j[j] += 1
        if j == 6:
            if neighbour_degrees.count(6) == 1:
                prime += 1
            else:
                doubleprime += 1
    return DegreeProfile(n, n_i, n_4_j, prime, doubleprime, partition_valid)


# ---------------------------------------------------------------- codecs

def to_networkx(graph: Graph) -> nx.Graph:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.order))
    nx_graph.add_edges_from(graph.edges())
    return nx_graph


def from_networkx(nx_graph: nx.Graph) -> Graph:
    nodes = sorted(nx_graph.nodes())
    position = {node: i for i, node in enumerate(nodes)}
    return build_graph(len(nodes), ((position[u], position[v]) for u, v in nx_graph.edges()))


def parse_graph6(text: str) -> Graph:
    """Parse one short-form graph6 line (order <= 62)."""
    line = text.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    if not line:
        raise MalformedGraph6Error("empty graph6 line")
    try:
        raw = line.encode("ascii")
    except UnicodeEncodeError as exc:
        raise MalformedGraph6Error("graph6 must be ASCII", details={"line": line}) from exc
    if any(b < 63 or b > 126 for b in raw):
        raise MalformedGraph6Error("graph6 byte outside 63..126", details={"line": line})
    if raw[0] == 126:
        raise UnsupportedOrderError("long-form graph6 (order > 62) is not supported", details={"line": line})
    if raw[0] == 63:
        raise MalformedGraph6Error("graph6 of the empty graph", details={"line": line})
    try:
        nx_graph = nx.from_graph6_bytes(raw)
    except (nx.NetworkXError, ValueError) as exc:
        raise MalformedGraph6Error(str(exc), details={"line": line}) from exc
    return from_networkx(nx_graph)


def write_graph6(graph: Graph) -> str:
    if graph.order > GRAPH6_MAX_ORDER:
        raise UnsupportedOrderError(
            f"graph6 short form holds at most {GRAPH6_MAX_ORDER} vertices",
            details={"order": graph.order},
        )
    return nx.to_graph6_bytes(to_networkx(graph), header=False).decode("ascii").strip()


def parse_edge_list(text: str) -> Graph:
    """First line ``n m``, then m lines ``u v`` (0-based)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise MalformedEdgeListError("missing 'n m' header")
    try:
        order, size = int(lines[0][0]), int(lines[0][1])
        pairs = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise MalformedEdgeListError(f"bad edge list: {exc}") from exc
    if len(pairs) != size:
        raise MalformedEdgeListError(
            f"header announces {size} edges, found {len(pairs)}",
            details={"expected": size, "found": len(pairs)},
        )
    return build_graph(order, pairs)


def write_edge_list(graph: Graph) -> str:
    edges = graph.edges()
    lines = [f"{graph.order} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"
