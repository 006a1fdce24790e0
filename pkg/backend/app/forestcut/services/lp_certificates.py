"""
Degree-profile linear programs with exact rational certificates.

The primal minimises half the degree sum over nonnegative degree counts of a
minimum-degree-4 graph; its dual carries the certificate that bounds the
primal from below by 11n/5. Everything is ``fractions.Fraction``; no float
ever enters this module.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.forestcut.exceptions import (
    BadParametersError,
    InfeasibleCertificateError,
    LpSolveError,
    MissingVariableError,
    NTooSmallError,
)
from app.forestcut.services.graph_core import DegreeProfile

logger = logging.getLogger(__name__)

MIN_N = 8
MAX_SOLVE_N = 64

EQ, GE, LE = "=", ">=", "<="


@dataclass(frozen=True)
class LpRow:
    row_id: str
    coefficients: Dict[str, Fraction]
    relation: str
    rhs: Fraction

    def lhs(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * point[v] for v, c in self.coefficients.items()), Fraction(0))


@dataclass(frozen=True)
class LpInstance:
    name: str
    sense: str
    variables: Tuple[str, ...]
    objective: Dict[str, Fraction]
    rows: Tuple[LpRow, ...]
    free: FrozenSet[str] = frozenset()

    def __post_init__(self):
        declared = set(self.variables)
        for row in self.rows:
            unknown = set(row.coefficients) - declared
            if unknown:
                raise MissingVariableError(
                    f"row {row.row_id} uses undeclared variables",
                    details={"row": row.row_id, "variables": sorted(unknown)},
                )

    def row(self, row_id: str) -> LpRow:
        return next(r for r in self.rows if r.row_id == row_id)


@dataclass(frozen=True)
class DualPoint:
    x1: Fraction
    x2: Fraction
    x3: Fraction
    x4: Fraction
    y: Dict[int, Fraction]

    def as_assignment(self) -> Dict[str, Fraction]:
        point = {"x_1": self.x1, "x_2": self.x2, "x_3": self.x3, "x_4": self.x4}
        point.update({f"y_{j}": value for j, value in self.y.items()})
        return point


def _row(row_id: str, terms: Iterable[Tuple[str, Fraction]], relation: str, rhs) -> LpRow:
    coefficients: Dict[str, Fraction] = {}
    for var, c in terms:
        coefficients[var] = coefficients.get(var, Fraction(0)) + Fraction(c)
    return LpRow(row_id, {v: c for v, c in coefficients.items() if c != 0}, relation, Fraction(rhs))


def _require_n(n: int) -> None:
    if n < MIN_N:
        raise NTooSmallError(f"the degree-profile programs need n >= {MIN_N}", details={"n": n})


def degree_var(i: int) -> str:
    return f"n_{i}"


def split_var(j) -> str:
    return f"n_4^{j}"


PRIME, DOUBLE_PRIME = "n_4^6'", "n_4^6''"


def primal_variables(n: int) -> Tuple[str, ...]:
    return (
        tuple(degree_var(i) for i in range(4, n))
        + tuple(split_var(j) for j in range(5, n))
        + (PRIME, DOUBLE_PRIME)
    )


def build_primal(n: int) -> LpInstance:
    """minimize 1/2 sum i n_i; rows are labelled by their dual variables."""
    _require_n(n)
    rows = [
        _row("x_1", ((degree_var(i), 1) for i in range(4, n)), EQ, n),
        _row("x_2", [(degree_var(4), 1)] + [(split_var(j), -1) for j in range(5, n)], EQ, 0),
        _row("x_3", [(split_var(6), 1), (PRIME, -1), (DOUBLE_PRIME, -1)], EQ, 0),
        _row("x_4", [(degree_var(j), j) for j in range(5, n)] + [(degree_var(4), -2)], GE, 0),
        _row("y_5", [(degree_var(5), 4), (split_var(5), -3), (PRIME, -1)], GE, 0),
        _row("y_6", [(degree_var(6), 6), (PRIME, -1), (DOUBLE_PRIME, -2)], GE, 0),
    ]
    rows += [_row(f"y_{j}", [(degree_var(j), j), (split_var(j), -1)], GE, 0) for j in range(7, n)]
    objective = {degree_var(i): Fraction(i, 2) for i in range(4, n)}
    return LpInstance("P", "min", primal_variables(n), objective, tuple(rows))


def dual_variables(n: int) -> Tuple[str, ...]:
    return ("x_1", "x_2", "x_3", "x_4") + tuple(f"y_{j}" for j in range(5, n))


def build_dual(n: int) -> LpInstance:
    """maximize n x_1; x_1..x_3 free, x_4 and every y_j nonnegative."""
    _require_n(n)
    half = Fraction(1, 2)
    rows = [
        _row(degree_var(4), [("x_2", 1), ("x_4", -2), ("x_1", 1)], LE, 2),
        _row(degree_var(5), [("y_5", 4), ("x_4", 5), ("x_1", 1)], LE, 5 * half),
        _row(degree_var(6), [("y_6", 6), ("x_4", 6), ("x_1", 1)], LE, 3),
    ]
    rows += [_row(degree_var(j), [(f"y_{j}", j), ("x_4", j), ("x_1", 1)], LE, j * half) for j in range(7, n)]
    rows += [
        _row(split_var(5), [("x_2", -1), ("y_5", -3)], LE, 0),
        _row(split_var(6), [("x_2", -1), ("x_3", 1)], LE, 0),
    ]
    rows += [_row(split_var(j), [("x_2", -1), (f"y_{j}", -1)], LE, 0) for j in range(7, n)]
    rows += [
        _row(PRIME, [("y_5", -1), ("y_6", -1), ("x_3", -1)], LE, 0),
        _row(DOUBLE_PRIME, [("y_6", -2), ("x_3", -1)], LE, 0),
    ]
    return LpInstance(
        "D", "max", dual_variables(n), {"x_1": Fraction(n)}, tuple(rows), frozenset({"x_1", "x_2", "x_3"})
    )


def dualize(primal: LpInstance) -> LpInstance:
    """
    Mechanical dual of a minimisation over nonnegative variables: one dual
    variable per row (free for '=', nonnegative for '>='), one '<=' row per
    primal variable.
    """
    if primal.sense != "min" or primal.free:
        raise BadParametersError("dualize expects a minimisation over nonnegative variables")
    if any(row.relation == LE for row in primal.rows):
        raise BadParametersError("dualize expects '=' and '>=' rows only")
    rows = tuple(
        _row(var, ((row.row_id, row.coefficients.get(var, 0)) for row in primal.rows), LE, primal.objective.get(var, 0))
        for var in primal.variables
    )
    objective = {row.row_id: row.rhs for row in primal.rows if row.rhs != 0}
    free = frozenset(row.row_id for row in primal.rows if row.relation == EQ)
    return LpInstance("D", "max", tuple(row.row_id for row in primal.rows), objective, rows, free)


def certificate_dual_point(n: int) -> DualPoint:
    _require_n(n)
    y = {5: Fraction(2, 35), 6: Fraction(4, 35)}
    y.update({j: Fraction(6, 35) for j in range(7, n)})
    return DualPoint(Fraction(11, 5), Fraction(-6, 35), Fraction(-6, 35), Fraction(1, 70), y)


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class RowCheck:
    row_id: str
    relation: str
    lhs: Fraction
    rhs: Fraction
    slack: Fraction
    satisfied: bool

    def render(self) -> str:
        return f"{self.row_id} {self.relation} {self.lhs} {self.rhs} {self.slack}"


@dataclass(frozen=True)
class FeasibilityReport:
    instance: str
    rows: Tuple[RowCheck, ...]
    signs: Tuple[RowCheck, ...]
    objective: Fraction

    @property
    def feasible(self) -> bool:
        return all(c.satisfied for c in self.rows + self.signs)

    @property
    def violated(self) -> List[str]:
        return [c.row_id for c in self.rows + self.signs if not c.satisfied]

    def slack(self, row_id: str) -> Fraction:
        return next(c.slack for c in self.rows if c.row_id == row_id)


def _check(row_id: str, relation: str, lhs: Fraction, rhs: Fraction) -> RowCheck:
    if relation == LE:
        slack = rhs - lhs
        return RowCheck(row_id, relation, lhs, rhs, slack, slack >= 0)
    slack = lhs - rhs
    ok = slack == 0 if relation == EQ else slack >= 0
    return RowCheck(row_id, relation, lhs, rhs, slack, ok)


def objective(instance: LpInstance, point: Mapping[str, Fraction]) -> Fraction:
    return sum((c * Fraction(point[v]) for v, c in instance.objective.items()), Fraction(0))


def check_feasible(instance: LpInstance, point: Mapping[str, Fraction]) -> FeasibilityReport:
    """Exact row-by-row evaluation; slack is oriented so that >= 0 means satisfied."""
    missing = [v for v in instance.variables if v not in point]
    if missing:
        raise MissingVariableError(
            f"point leaves {len(missing)} variable(s) unassigned", details={"missing": missing}
        )
    values = {v: Fraction(point[v]) for v in instance.variables}
    rows = tuple(_check(r.row_id, r.relation, r.lhs(values), r.rhs) for r in instance.rows)
    signs = tuple(
        _check(f"sign:{v}", GE, values[v], Fraction(0)) for v in instance.variables if v not in instance.free
    )
    return FeasibilityReport(instance.name, rows, signs, objective(instance, values))


def weak_duality_bound(n: int, point: DualPoint) -> Fraction:
    """n * x_1, once the point is verified feasible for the dual program."""
    report = check_feasible(build_dual(n), point.as_assignment())
    if not report.feasible:
        raise InfeasibleCertificateError(
            "dual point violates the dual program", details={"n": n, "violated": report.violated}
        )
    return n * point.x1


def profile_primal_point(profile: DegreeProfile, n: Optional[int] = None) -> Dict[str, Fraction]:
    """A graph's degree counts as a point of the primal program."""
    n = profile.order if n is None else n
    _require_n(n)
    point = {degree_var(i): Fraction(profile.count(i)) for i in range(4, n)}
    point.update({split_var(j): Fraction(profile.count_4(j)) for j in range(5, n)})
    point[PRIME] = Fraction(profile.n_4_6_prime)
    point[DOUBLE_PRIME] = Fraction(profile.n_4_6_doubleprime)
    return point


def complementary_optimum(n: int) -> Dict[str, Fraction]:
    """Primal point of value 11n/5, tight against the dual certificate."""
    _require_n(n)
    point = {v: Fraction(0) for v in primal_variables(n)}
    point[degree_var(4)] = Fraction(11 * n, 15)
    point[degree_var(5)] = Fraction(n, 5)
    point[degree_var(7)] = Fraction(n, 15)
    point[split_var(5)] = Fraction(4 * n, 15)
    point[split_var(7)] = Fraction(7 * n, 15)
    return point


# ---------------------------------------------------------------- exact simplex

@dataclass
class _StandardForm:
    """min c.x subject to A x = b, x >= 0, b >= 0."""

    columns: List[str]
    matrix: List[List[Fraction]]
    rhs: List[Fraction]
    cost: List[Fraction]


def _standard_form(instance: LpInstance) -> _StandardForm:
    if instance.free:
        raise BadParametersError("the simplex solves programs over nonnegative variables only")
    columns = list(instance.variables)
    extra = [r for r in instance.rows if r.relation != EQ]
    columns += [f"s:{r.row_id}" for r in extra]
    matrix, rhs = [], []
    for row in instance.rows:
        line = [row.coefficients.get(v, Fraction(0)) for v in instance.variables]
        line += [
            Fraction(-1 if row.relation == GE else 1) if r is row else Fraction(0) for r in extra
        ]
        b = row.rhs
        if b < 0:
            line, b = [-c for c in line], -b
        matrix.append(line)
        rhs.append(b)
    sign = 1 if instance.sense == "min" else -1
    cost = [sign * instance.objective.get(v, Fraction(0)) for v in instance.variables]
    cost += [Fraction(0)] * len(extra)
    return _StandardForm(columns, matrix, rhs, cost)


class ExactSimplex:
    """
    Two-phase tableau simplex over Fractions with Bland's least-index rule,
    so it always terminates and always pivots the same way.
    """

    def __init__(self, form: _StandardForm):
        self.form = form
        self.rows = len(form.matrix)
        self.width = len(form.columns)
        # tableau columns: structural, then one artificial per row, then rhs
        self.table = [
            list(line) + [Fraction(int(i == k)) for k in range(self.rows)] + [b]
            for i, (line, b) in enumerate(zip(form.matrix, form.rhs))
        ]
        self.basis = [self.width + i for i in range(self.rows)]
        self.pivots = 0

    def _pivot(self, r: int, col: int) -> None:
        table = self.table
        p = table[r][col]
        table[r] = [v / p for v in table[r]]
        for i in range(self.rows):
            factor = table[i][col]
            if i != r and factor:
                table[i] = [a - factor * b for a, b in zip(table[i], table[r])]
        self.basis[r] = col
        self.pivots += 1

    def _run(self, cost: Sequence[Fraction], allowed: int) -> None:
        while True:
            entering = None
            for j in range(allowed):
                if j in self.basis:
                    continue
                reduced = cost[j] - sum(cost[self.basis[i]] * self.table[i][j] for i in range(self.rows))
                if reduced < 0:
                    entering = j
                    break
            if entering is None:
                return
            leaving, best = None, None
            for i in range(self.rows):
                a = self.table[i][entering]
                if a > 0:
                    ratio = self.table[i][-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leaving]):
                        leaving, best = i, ratio
            if leaving is None:
                raise LpSolveError("program is unbounded", details={"column": self.form.columns[entering]})
            self._pivot(leaving, entering)

    def solve(self) -> Tuple[Fraction, Dict[str, Fraction]]:
        total = self.width + self.rows
        phase1 = [Fraction(0)] * self.width + [Fraction(1)] * self.rows
        self._run(phase1, total)
        if sum(self.table[i][-1] for i in range(self.rows) if self.basis[i] >= self.width) != 0:
            raise LpSolveError("program is infeasible")
        for i in range(self.rows):
            if self.basis[i] >= self.width:
                col = next((j for j in range(self.width) if self.table[i][j] != 0), None)
                if col is not None:
                    self._pivot(i, col)
        cost = list(self.form.cost) + [Fraction(0)] * self.rows
        self._run(cost, self.width)
        values = {name: Fraction(0) for name in self.form.columns}
        for i, col in enumerate(self.basis):
            if col < self.width:
                values[self.form.columns[col]] = self.table[i][-1]
        value = sum((c * values[name] for c, name in zip(self.form.cost, self.form.columns)), Fraction(0))
        return value, values


def solve_exact(instance: LpInstance) -> Tuple[Fraction, Dict[str, Fraction]]:
    """Optimum value (in the instance's own sense) and an optimal point."""
    solver = ExactSimplex(_standard_form(instance))
    value, values = solver.solve()
    if instance.sense == "max":
        value = -value
    logger.debug("lp_solved", extra={"instance": instance.name, "pivots": solver.pivots, "value": str(value)})
    return value, {v: values[v] for v in instance.variables}


def solve_primal_exact(n: int) -> Fraction:
    _require_n(n)
    if n > MAX_SOLVE_N:
        raise BadParametersError(f"exact solve capped at n = {MAX_SOLVE_N}", details={"n": n})
    value, _ = solve_exact(build_primal(n))
    return value


def _solve_square(matrix: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Gauss-Jordan over Fractions; None if singular."""
    size = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][-1] for r in range(size)]


def basic_feasible_optimum(instance: LpInstance, max_bases: int = 200_000) -> Fraction:
    """
    Independent oracle: best objective over every basic feasible solution
    of the standard-form system. Only for small instances.
    """
    form = _standard_form(instance)
    rows, width = len(form.matrix), len(form.columns)
    best: Optional[Fraction] = None
    for count, basis in enumerate(itertools.combinations(range(width), rows)):
        if count >= max_bases:
            raise BadParametersError("too many bases for the enumeration oracle", details={"cap": max_bases})
        square = [[line[j] for j in basis] for line in form.matrix]
        solution = _solve_square(square, form.rhs)
        if solution is None or any(v < 0 for v in solution):
            continue
        value = sum((form.cost[j] * v for j, v in zip(basis, solution)), Fraction(0))
        if best is None or value < best:
            best = value
    if best is None:
        raise LpSolveError("no basic feasible solution")
    return -best if instance.sense == "max" else best


# ---------------------------------------------------------------- report

def render_certificate_report(n: int, solve: bool = False) -> Tuple[str, bool]:
    """Per-row slack of the dual certificate, the weak-duality bound, and optionally OPT(P)."""
    dual = build_dual(n)
    point = certificate_dual_point(n)
    report = check_feasible(dual, point.as_assignment())
    lines = ["row-id relation lhs rhs slack"]
    lines += [c.render() for c in report.rows + report.signs]
    lines.append(f"feasible {'yes' if report.feasible else 'no'}")
    if report.feasible:
        lines.append(f"bound {n * point.x1}")
    if solve:
        lines.append(f"optimum {solve_primal_exact(n)}")
    return "\n".join(lines) + "\n", report.feasible
