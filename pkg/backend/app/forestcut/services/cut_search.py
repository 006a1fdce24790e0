"""
Forest cuts and independent cuts.

Two finders per kind: the exhaustive oracle (every subset, smallest first)
and the production finder driven by inclusion-minimal separators. Any
vertex cut contains an inclusion-minimal one, and subsets of forests
(resp. independent sets) stay forests (resp. independent), so scanning the
minimal separators decides existence exactly.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, List, Optional, Tuple

from app.forestcut.exceptions import CompleteGraphError, OutOfRangeError, SearchTooLargeError
from app.forestcut.services.graph_core import (
    Graph,
    VertexSet,
    components,
    induced_is_forest,
    induced_is_independent,
    is_complete,
    is_connected,
    is_vertex_cut,
    iter_bits,
    remove_vertex,
    require_connected,
    universal_vertices,
    vertex_connectivity_at_least,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_ORDER = 28


class CutKind(Enum):
    FOREST = "forest"
    INDEPENDENT = "independent"


@dataclass(frozen=True)
class CutWitness:
    """A cut plus two representatives lying in different components of G - cut."""

    cut: VertexSet
    rep_a: int
    rep_b: int
    kind: CutKind

    def describe(self) -> str:
        return f"{self.kind.value} {','.join(map(str, self.cut))} reps {self.rep_a} {self.rep_b}"


def _witness(graph: Graph, mask: int, kind: CutKind) -> Optional[CutWitness]:
    """Witness for ``mask`` if it is a cut of the requested kind."""
    rest = graph.full_mask & ~mask
    if not rest:
        return None
    comps = components(graph, rest)
    if len(comps) < 2:
        return None
    cut = VertexSet(mask)
    if kind is CutKind.FOREST and not induced_is_forest(graph, cut):
        return None
    if kind is CutKind.INDEPENDENT and not induced_is_independent(graph, cut):
        return None
    rep_a = next(iter_bits(comps[0]))
    rep_b = next(iter_bits(comps[1]))
    return CutWitness(cut, rep_a, rep_b, kind)


def validate_witness(graph: Graph, witness: CutWitness) -> bool:
    """Re-check a witness from scratch."""
    if not is_vertex_cut(graph, witness.cut):
        return False
    rest = graph.full_mask & ~witness.cut.bits
    home = [c for c in components(graph, rest) if c >> witness.rep_a & 1]
    if not home or not rest >> witness.rep_b & 1 or home[0] >> witness.rep_b & 1:
        return False
    if witness.kind is CutKind.FOREST:
        return induced_is_forest(graph, witness.cut)
    return induced_is_independent(graph, witness.cut)


def _same_popcount_ascending(n: int, k: int) -> Iterator[int]:
    """All k-subsets of {0..n-1} as masks in increasing numeric order (Gosper)."""
    if k == 0:
        yield 0
        return
    if k > n:
        return
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = (((ripple ^ mask) >> 2) // low) | ripple


def _exhaustive(graph: Graph, kind: CutKind, avoid: int = 0, max_order: int = EXHAUSTIVE_MAX_ORDER) -> Optional[CutWitness]:
    require_connected(graph)
    if graph.order > max_order:
        raise SearchTooLargeError(
            f"exhaustive search capped at {max_order} vertices",
            details={"order": graph.order, "cap": max_order},
        )
    n = graph.order
    for size in range(1, n - 1):
        for mask in _same_popcount_ascending(n, size):
            if mask & avoid:
                continue
            found = _witness(graph, mask, kind)
            if found:
                return found
    return None


def find_forest_cut_exhaustive(graph: Graph, max_order: int = EXHAUSTIVE_MAX_ORDER) -> Optional[CutWitness]:
    """Brute-force oracle: smallest size first, then ascending bit pattern."""
    return _exhaustive(graph, CutKind.FOREST, max_order=max_order)


def find_independent_cut_exhaustive(
    graph: Graph, avoid_vertex: Optional[int] = None, max_order: int = EXHAUSTIVE_MAX_ORDER
) -> Optional[CutWitness]:
    avoid = 0 if avoid_vertex is None else 1 << avoid_vertex
    return _exhaustive(graph, CutKind.INDEPENDENT, avoid=avoid, max_order=max_order)


# ---------------------------------------------------------------- separators

def _close_neighbourhood(graph: Graph, mask: int) -> int:
    """N(C): vertices outside C adjacent to C."""
    reach = 0
    for v in iter_bits(mask):
        reach |= graph.adj[v]
    return reach & ~mask


def _is_inclusion_minimal(graph: Graph, separator: int) -> bool:
    """Every component of G - S is full (sees every vertex of S)."""
    comps = components(graph, graph.full_mask & ~separator)
    if len(comps) < 2:
        return False
    return all(_close_neighbourhood(graph, comp) == separator for comp in comps)


def _minimal_separators(graph: Graph) -> Iterator[int]:
    """
    All minimal a-b separators, each once: seeds N(C) for the components C
    of G - N[v], then closes under S -> N(C) for the components C of
    G - (S u N(x)), x in S.
    """
    full = graph.full_mask
    seen = set()
    queue: deque = deque()

    def offer(candidate: int) -> None:
        if candidate and candidate not in seen:
            seen.add(candidate)
            queue.append(candidate)

    for v in range(graph.order):
        closed = graph.adj[v] | (1 << v)
        for comp in components(graph, full & ~closed):
            offer(_close_neighbourhood(graph, comp))
    while queue:
        separator = queue.popleft()
        yield separator
        for x in iter_bits(separator):
            blocked = separator | graph.adj[x]
            for comp in components(graph, full & ~blocked):
                offer(_close_neighbourhood(graph, comp))


def enumerate_minimal_separators(graph: Graph) -> Iterator[VertexSet]:
    """
    Every inclusion-minimal vertex cut exactly once, in discovery order
    (vertices and components are always visited in ascending order).
    """
    require_connected(graph)
    if is_complete(graph):
        raise CompleteGraphError("a complete graph has no vertex cut", details={"order": graph.order})
    for separator in _minimal_separators(graph):
        if _is_inclusion_minimal(graph, separator):
            yield VertexSet(separator)


def _scan_separators(graph: Graph, accept: Callable[[VertexSet], bool], kind: CutKind) -> Optional[CutWitness]:
    if is_complete(graph):
        return None
    for separator in enumerate_minimal_separators(graph):
        if accept(separator):
            return _witness(graph, separator.bits, kind)
    return None


def _small_forest_cut(graph: Graph) -> Optional[CutWitness]:
    """Any cut of at most two vertices induces a forest."""
    n = graph.order
    for size in (1, 2):
        for mask in _same_popcount_ascending(n, size):
            found = _witness(graph, mask, CutKind.FOREST)
            if found:
                return found
    return None


# ---------------------------------------------------------------- reduction

def universal_vertex_reduction(graph: Graph) -> Optional[Tuple[int, Graph]]:
    """(u, G - u) for the lowest universal vertex u, if any."""
    universal = universal_vertices(graph)
    if not universal or graph.order < 2:
        return None
    u = universal[0]
    reduced, _ = remove_vertex(graph, u)
    return u, reduced


def _lift(old_ids: Tuple[int, ...], mask: int) -> int:
    lifted = 0
    for v in iter_bits(mask):
        lifted |= 1 << old_ids[v]
    return lifted


def _independent_cut_mask(graph: Graph, avoid: int = 0) -> Optional[int]:
    """Mask of an independent cut avoiding ``avoid``; the graph may be disconnected."""
    if graph.order < 2:
        return None
    if not is_connected(graph):
        return 0
    if graph.order < 3:
        return None
    universal = universal_vertices(graph)
    if universal:
        # a universal vertex lies in every cut, so an independent cut is {u} alone
        u = universal[0]
        if avoid >> u & 1:
            return None
        reduced, _ = remove_vertex(graph, u)
        return None if is_connected(reduced) else 1 << u
    for separator in enumerate_minimal_separators(graph):
        if separator.bits & avoid:
            continue
        if induced_is_independent(graph, separator):
            return separator.bits
    return None


def find_independent_cut(graph: Graph) -> Optional[CutWitness]:
    """An independent cut of a connected graph, if one exists."""
    require_connected(graph)
    if graph.order < 3:
        return None
    mask = _independent_cut_mask(graph)
    return None if mask is None else _witness(graph, mask, CutKind.INDEPENDENT)


def find_independent_cut_avoiding(graph: Graph, u: int) -> Optional[CutWitness]:
    """An independent cut S with u not in S."""
    require_connected(graph)
    if not 0 <= u < graph.order:
        raise OutOfRangeError(f"vertex {u} out of range", details={"vertex": u, "order": graph.order})
    if graph.order < 3:
        return None
    mask = _independent_cut_mask(graph, avoid=1 << u)
    return None if mask is None else _witness(graph, mask, CutKind.INDEPENDENT)


def find_forest_cut(graph: Graph) -> Optional[CutWitness]:
    """
    Production finder. Order of attack: cuts of size <= 2, the universal
    vertex reduction (G has a forest cut iff G - u has an independent cut),
    then the inclusion-minimal separators.
    """
    require_connected(graph)
    if graph.order < 3:
        return None
    small = _small_forest_cut(graph)
    if small:
        return small
    reduction = universal_vertex_reduction(graph)
    if reduction is not None:
        u, reduced = reduction
        _, old_ids = remove_vertex(graph, u)
        mask = _independent_cut_mask(reduced)
        if mask is None:
            return None
        return _witness(graph, (1 << u) | _lift(old_ids, mask), CutKind.FOREST)
    return _scan_separators(graph, lambda s: induced_is_forest(graph, s), CutKind.FOREST)


def all_minimal_forest_cuts(graph: Graph) -> List[VertexSet]:
    """Inclusion-minimal cuts inducing a forest, sorted by (size, bit pattern)."""
    cuts = [s for s in enumerate_minimal_separators(graph) if induced_is_forest(graph, s)]
    return sorted(cuts, key=lambda s: (len(s), s.bits))


def forest_cut_free_necessary_conditions(graph: Graph) -> bool:
    """
    A graph without a forest cut is 3-connected and every G[N(u)] has a
    cycle. False here means a forest cut certainly exists.
    """
    if not vertex_connectivity_at_least(graph, 3):
        return False
    return all(not induced_is_forest(graph, graph.neighbors(v)) for v in range(graph.order))
