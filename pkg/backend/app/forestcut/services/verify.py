"""
Empirical checkers over small-graph corpora.

Corpora are either the built-in enumeration of connected graphs (n <= 7)
or graph6 files produced elsewhere. Each claim has a pure per-graph
predicate ("is this graph a counterexample?"); corpora are cut into
chunks of graph6 lines and the chunks are checked in-process, on a local
process pool or on the Celery queue. Chunk results merge by summing counts
and taking the sorted union of canonical graph6 strings, so the report
does not depend on how the work was split.
"""

from __future__ import annotations

import itertools
import logging
import random
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from app.forestcut.domain.schemas import AuditRecord, CheckReport
from app.forestcut.exceptions import (
    BadParametersError,
    ForestCutError,
    OrderTooLargeForEnumerationError,
    OutOfRangeError,
    ThresholdSyntaxError,
    UnsupportedCensusOrderError,
)
from app.forestcut.services.cut_search import (
    find_forest_cut,
    find_independent_cut,
    find_independent_cut_avoiding,
)
from app.forestcut.services.graph_core import (
    GRAPH6_MAX_ORDER,
    Graph,
    build_graph,
    degree_profile,
    degree_sum,
    induced_is_forest,
    is_connected,
    iter_bits,
    parse_graph6,
    relabel,
    to_networkx,
    vertex_connectivity_at_least,
    write_graph6,
)
from app.forestcut.services.lp_certificates import (
    MIN_N,
    build_primal,
    check_feasible,
    objective,
    profile_primal_point,
)

logger = logging.getLogger(__name__)

ENUMERATION_MAX_ORDER = 7
CENSUS_ORDERS = (6, 7)
CONJECTURE2_MIN_ORDER = 6
DEFAULT_CHUNK_SIZE = 64


# ---------------------------------------------------------------- canonical form

def _refined_colours(graph: Graph) -> List[int]:
    """Stable colour refinement started from degrees; colours are ranks of invariant signatures."""
    colours = list(graph.degrees())
    while True:
        signatures = [
            (colours[v], tuple(sorted(colours[w] for w in iter_bits(graph.adj[v]))))
            for v in range(graph.order)
        ]
        ranking = {sig: rank for rank, sig in enumerate(sorted(set(signatures), reverse=True))}
        refined = [ranking[sig] for sig in signatures]
        if len(set(refined)) == len(set(colours)):
            return refined
        colours = refined


def _bit_key(graph: Graph, order: Sequence[int]) -> int:
    """Upper triangle in graph6 order (column by column) read as a binary number."""
    key = 0
    for j in range(1, len(order)):
        row = graph.adj[order[j]]
        for i in range(j):
            key = (key << 1) | (row >> order[i] & 1)
    return key


def canonical_graph(graph: Graph) -> Graph:
    """
    Minimum bit string over the vertex orderings that list colour classes
    in rank order. Colour classes are isomorphism invariant, so this is a
    complete invariant.
    """
    colours = _refined_colours(graph)
    classes = [
        [v for v in range(graph.order) if colours[v] == c] for c in sorted(set(colours))
    ]
    best_key, best_order = None, None
    for parts in itertools.product(*(itertools.permutations(cls) for cls in classes)):
        order = [v for part in parts for v in part]
        key = _bit_key(graph, order)
        if best_key is None or key < best_key:
            best_key, best_order = key, order
    position = [0] * graph.order
    for new, old in enumerate(best_order):
        position[old] = new
    return relabel(graph, position)


def canonical_graph6(graph: Graph) -> str:
    return write_graph6(canonical_graph(graph))


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _all_graphs(n: int) -> Tuple[Graph, ...]:
    """Every graph of order n (connected or not), one per isomorphism class, in canonical key order."""
    if n == 1:
        return (Graph(1, (0,)),)
    seen: Dict[Tuple[int, ...], Graph] = {}
    for smaller in _all_graphs(n - 1):
        for mask in range(1 << (n - 1)):
            rows = [row | ((mask >> v & 1) << (n - 1)) for v, row in enumerate(smaller.adj)]
            candidate = canonical_graph(Graph(n, tuple(rows) + (mask,)))
            seen.setdefault(candidate.adj, candidate)
    return tuple(seen[key] for key in sorted(seen))


def enumerate_connected_graphs(n: int) -> Iterator[Graph]:
    """One canonical representative per isomorphism class of connected graphs of order n."""
    if n > ENUMERATION_MAX_ORDER:
        raise OrderTooLargeForEnumerationError(
            f"built-in enumeration stops at n = {ENUMERATION_MAX_ORDER}; ingest a graph6 corpus instead",
            details={"n": n},
        )
    if n < 1:
        raise OutOfRangeError("order must be at least 1", details={"n": n})
    return (g for g in _all_graphs(n) if is_connected(g))


def random_connected_graph(order: int, seed: int, density: float = 0.3) -> Graph:
    """Random spanning tree plus independent extra edges, all from ``random.Random(seed)``."""
    if order < 1:
        raise OutOfRangeError("order must be at least 1", details={"order": order})
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, order)}
    for u, v in itertools.combinations(range(order), 2):
        if (u, v) not in edges and rng.random() < density:
            edges.add((u, v))
    return build_graph(order, sorted(edges))


# ---------------------------------------------------------------- ingestion

@dataclass
class Graph6Corpus:
    """Lazily parsed graph6 file; malformed lines are collected, not raised."""

    path: str
    malformed: List[Tuple[int, str]] = field(default_factory=list)

    def __iter__(self) -> Iterator[Graph]:
        self.malformed.clear()
        with open(self.path, "r", encoding="ascii", errors="replace") as handle:
            for line_no, line in enumerate(handle, start=1):
                text = line.strip()
                if not text:
                    continue
                try:
                    yield parse_graph6(text)
                except ForestCutError as exc:
                    logger.warning("graph6_malformed_line", extra={"line": line_no, "code": exc.code})
                    self.malformed.append((line_no, text))


def ingest_graph6(path: str) -> Graph6Corpus:
    return Graph6Corpus(path)


# ---------------------------------------------------------------- claims

def theorem2_threshold(n: int) -> Fraction:
    return Fraction(11 * n, 5) - Fraction(18, 5)


def conjecture2_threshold(n: int) -> Fraction:
    return Fraction(7 * (n - 1), 3)


def every_neighbourhood_has_cycle(graph: Graph) -> bool:
    return all(not induced_is_forest(graph, graph.neighbors(v)) for v in range(graph.order))


def violates_conjecture1(graph: Graph, **_) -> bool:
    n, m = graph.order, graph.size
    if n < 3 or m >= 3 * n - 6 or not is_connected(graph):
        return False
    return find_forest_cut(graph) is None


def violates_theorem2(graph: Graph, **_) -> bool:
    n, m = graph.order, graph.size
    if n < 3 or m >= theorem2_threshold(n) or not is_connected(graph):
        return False
    return find_forest_cut(graph) is None


def violates_chen_yu(graph: Graph, **_) -> bool:
    n, m = graph.order, graph.size
    if n < 3 or m >= 2 * n - 3 or not is_connected(graph):
        return False
    return find_independent_cut(graph) is None


def violates_theorem1(graph: Graph, **_) -> bool:
    n, m = graph.order, graph.size
    if n < 3 or m >= 2 * n - 3 or not vertex_connectivity_at_least(graph, 2):
        return False
    return any(find_independent_cut_avoiding(graph, u) is None for u in range(n))


def violates_conjecture2(graph: Graph, conjecture2_min_order: int = CONJECTURE2_MIN_ORDER, **_) -> bool:
    n = graph.order
    if n < conjecture2_min_order or graph.size >= conjecture2_threshold(n):
        return False
    return vertex_connectivity_at_least(graph, 3) and every_neighbourhood_has_cycle(graph)


CLAIMS: Dict[str, Callable[..., bool]] = {
    "conjecture1": violates_conjecture1,
    "theorem2": violates_theorem2,
    "chenyu": violates_chen_yu,
    "theorem1": violates_theorem1,
    "conjecture2": violates_conjecture2,
}


def check_chunk(claim: str, lines: Sequence[str], conjecture2_min_order: int = CONJECTURE2_MIN_ORDER) -> Dict:
    """Per-chunk worker body; plain dict in and out so it travels through Celery."""
    predicate = _predicate(claim)
    flagged = []
    for line in lines:
        graph = parse_graph6(line)
        if predicate(graph, conjecture2_min_order=conjecture2_min_order):
            flagged.append(canonical_graph6(graph))
    return {"scanned": len(lines), "counterexamples": flagged}


def _predicate(claim: str) -> Callable[..., bool]:
    try:
        return CLAIMS[claim]
    except KeyError:
        raise BadParametersError(f"unknown claim {claim!r}", details={"known": sorted(CLAIMS)}) from None


def _chunks(graphs: Iterable[Graph], size: int) -> Iterator[List[str]]:
    chunk: List[str] = []
    for graph in graphs:
        chunk.append(write_graph6(graph))
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def _dispatch_celery(claim: str, chunks: List[List[str]], conjecture2_min_order: int) -> List[Dict]:
    from app.forestcut.tasks import check_corpus_chunk

    pending = [check_corpus_chunk.delay(claim, chunk, conjecture2_min_order) for chunk in chunks]
    return [result.get() for result in pending]


def run_claim(
    claim: str,
    graphs: Iterable[Graph],
    corpus: str,
    workers: int = 1,
    dispatch: str = "local",
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    conjecture2_min_order: int = CONJECTURE2_MIN_ORDER,
) -> CheckReport:
    """Check one claim over a corpus; the report is independent of workers and dispatch."""
    _predicate(claim)
    if workers < 1 or chunk_size < 1:
        raise BadParametersError("workers and chunk size must be positive", details={"workers": workers})
    started = time.monotonic()
    chunks = list(_chunks(graphs, chunk_size))
    if dispatch == "celery":
        results = _dispatch_celery(claim, chunks, conjecture2_min_order)
    elif dispatch != "local":
        raise BadParametersError(f"unknown dispatch {dispatch!r}", details={"dispatch": dispatch})
    elif workers == 1 or len(chunks) < 2:
        results = [check_chunk(claim, chunk, conjecture2_min_order) for chunk in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(check_chunk, claim, chunk, conjecture2_min_order) for chunk in chunks]
            results = [f.result() for f in futures]
    report = CheckReport(claim=claim, corpus=corpus)
    for result in results:
        report = report.merge(CheckReport(claim=claim, corpus=corpus, **result))
    malformed = len(getattr(graphs, "malformed", ()))
    elapsed_ms = round((time.monotonic() - started) * 1000, 1)
    report = report.model_copy(update={"malformed": malformed, "elapsed_ms": elapsed_ms})
    logger.info(
        "claim_checked",
        extra={
            "claim": claim,
            "corpus": corpus,
            "scanned": report.scanned,
            "counterexamples": len(report.counterexamples),
            "elapsed_ms": elapsed_ms,
            "workers": workers,
            "dispatch": dispatch,
        },
    )
    return report


def check_conjecture1(graphs: Iterable[Graph], corpus: str = "corpus", **options) -> CheckReport:
    return run_claim("conjecture1", graphs, corpus, **options)


def check_theorem2(graphs: Iterable[Graph], corpus: str = "corpus", **options) -> CheckReport:
    return run_claim("theorem2", graphs, corpus, **options)


def check_chen_yu(graphs: Iterable[Graph], corpus: str = "corpus", **options) -> CheckReport:
    return run_claim("chenyu", graphs, corpus, **options)


def check_theorem1(graphs: Iterable[Graph], corpus: str = "corpus", **options) -> CheckReport:
    return run_claim("theorem1", graphs, corpus, **options)


def check_conjecture2(graphs: Iterable[Graph], corpus: str = "corpus", **options) -> CheckReport:
    return run_claim("conjecture2", graphs, corpus, **options)


# ---------------------------------------------------------------- census

def figure1_census(n: int) -> List[Graph]:
    """3-connected graphs of order n with fewer than 11n/5 - 18/5 edges."""
    if n not in CENSUS_ORDERS:
        raise UnsupportedCensusOrderError(
            f"census is defined for n in {CENSUS_ORDERS}", details={"n": n}
        )
    bound = theorem2_threshold(n)
    return [
        g for g in enumerate_connected_graphs(n)
        if g.size < bound and vertex_connectivity_at_least(g, 3)
    ]


def match_isomorphic(graphs: Sequence[Graph], references: Dict[str, Graph]) -> Dict[str, List[int]]:
    """For each named reference, the indices of the graphs isomorphic to it."""
    nx_graphs = [to_networkx(g) for g in graphs]
    return {
        name: [i for i, candidate in enumerate(nx_graphs) if nx.is_isomorphic(candidate, to_networkx(ref))]
        for name, ref in references.items()
    }


# ---------------------------------------------------------------- audit

def audit_claim_inequalities(graph: Graph) -> AuditRecord:
    """Evaluate the degree-profile inequalities and the neighbourhood claims on one graph."""
    n, m = graph.order, graph.size
    degrees = graph.degrees()
    profile = degree_profile(graph)
    fours = [v for v in range(n) if degrees[v] == 4]
    fives = [v for v in range(n) if degrees[v] == 5]

    def neighbour_degrees(v: int) -> List[int]:
        return [degrees[w] for w in iter_bits(graph.adj[v])]

    min_degree_ok = n > 0 and min(degrees) >= 4
    primal_feasible = objective_ok = False
    if min_degree_ok and n >= MIN_N:
        primal = build_primal(n)
        point = profile_primal_point(profile, n)
        primal_feasible = check_feasible(primal, point).feasible
        objective_ok = objective(primal, point) == m

    return AuditRecord(
        graph6=write_graph6(graph) if n <= GRAPH6_MAX_ORDER else None,
        order=n,
        size=m,
        partition_valid=profile.partition_valid,
        degree_sum_row=sum(j * profile.count(j) for j in range(5, n)) >= 2 * profile.count(4),
        five_row=4 * profile.count(5) >= 3 * profile.count_4(5) + profile.n_4_6_prime,
        six_row=6 * profile.count(6) >= profile.n_4_6_prime + 2 * profile.n_4_6_doubleprime,
        j_rows=all(j * profile.count(j) >= profile.count_4(j) for j in range(7, n)),
        min_degree_at_least_4=min_degree_ok,
        four_connected=vertex_connectivity_at_least(graph, 4),
        degree4_neighbourhood_sum_ok=all(degree_sum(graph, graph.neighbors(u)) >= 19 for u in fours),
        degree4_at_most_two_degree4_neighbours=all(neighbour_degrees(u).count(4) <= 2 for u in fours),
        degree4_not_all_neighbours_degree4=all(any(d != 4 for d in neighbour_degrees(u)) for u in fours),
        degree5_has_non4_neighbour=all(any(d != 4 for d in neighbour_degrees(v)) for v in fives),
        primal_feasible=primal_feasible,
        objective_matches_size=objective_ok,
    )


# ---------------------------------------------------------------- thresholds

_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?n)?")


@dataclass(frozen=True)
class Threshold:
    """slope * n + intercept, exact."""

    slope: Fraction
    intercept: Fraction

    def __call__(self, n: int) -> Fraction:
        return self.slope * n + self.intercept


def parse_threshold(expr: str) -> Threshold:
    """Parse the rational grammar used on the command line, e.g. ``11/5n-18/5`` or ``2*n-3``."""
    text = expr.replace(" ", "")
    if not text:
        raise ThresholdSyntaxError("empty threshold expression")
    slope = intercept = Fraction(0)
    pos = 0
    while pos < len(text):
        match = _TERM.match(text, pos)
        sign, number, variable = match.groups()
        if match.end() == pos or not (number or variable) or (pos and not sign):
            raise ThresholdSyntaxError(f"cannot parse {expr!r} at offset {pos}", details={"expr": expr})
        if variable == "*n" and not number:
            raise ThresholdSyntaxError(f"'*n' needs a coefficient in {expr!r}", details={"expr": expr})
        try:
            value = Fraction(number) if number else Fraction(1)
        except ZeroDivisionError:
            raise ThresholdSyntaxError(f"zero denominator in {expr!r}", details={"expr": expr}) from None
        if sign == "-":
            value = -value
        if variable:
            slope += value
        else:
            intercept += value
        pos = match.end()
    return Threshold(slope, intercept)
