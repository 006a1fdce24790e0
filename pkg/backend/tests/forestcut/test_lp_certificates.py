"""Tests for the degree-profile programs, the dual certificate and the exact solvers."""
from dataclasses import replace
from fractions import Fraction

from django.test import SimpleTestCase

from app.forestcut.exceptions import (
    BadParametersError,
    InfeasibleCertificateError,
    MissingVariableError,
    NTooSmallError,
)
from app.forestcut.services.constructions import fixture
from app.forestcut.services.graph_core import degree_profile
from app.forestcut.services.lp_certificates import (
    LpInstance,
    LpRow,
    basic_feasible_optimum,
    build_dual,
    build_primal,
    check_feasible,
    complementary_optimum,
    dualize,
    objective,
    certificate_dual_point,
    profile_primal_point,
    render_certificate_report,
    solve_exact,
    solve_primal_exact,
    weak_duality_bound,
)


class ProgramShapeTest(SimpleTestCase):
    def test_primal_dimensions(self):
        primal = build_primal(8)
        self.assertEqual(len(primal.variables), 2 * 8 - 7)
        self.assertEqual(len(primal.rows), 8 - 1)
        self.assertEqual(primal.objective["n_7"], Fraction(7, 2))
        self.assertEqual(primal.row("x_4").coefficients, {"n_5": 5, "n_6": 6, "n_7": 7, "n_4": -2})

    def test_dual_row(self):
        row = build_dual(8).row("n_7")
        self.assertEqual(row.coefficients, {"y_7": 7, "x_4": 7, "x_1": 1})
        self.assertEqual(row.relation, "<=")
        self.assertEqual(row.rhs, Fraction(7, 2))

    def test_dualize_reproduces_dual(self):
        for n in range(8, 13):
            self.assertEqual(dualize(build_primal(n)), build_dual(n))

    def test_n_too_small(self):
        for build in (build_primal, build_dual, certificate_dual_point):
            with self.assertRaises(NTooSmallError):
                build(7)

    def test_undeclared_variable(self):
        with self.assertRaises(MissingVariableError):
            LpInstance("bad", "min", ("a",), {"a": Fraction(1)}, (LpRow("r", {"b": Fraction(1)}, ">=", Fraction(0)),))


class CertificateTest(SimpleTestCase):
    def test_certificate_slacks(self):
        report = check_feasible(build_dual(20), certificate_dual_point(20).as_assignment())
        self.assertTrue(report.feasible)
        self.assertEqual(report.violated, [])
        for row_id in ("n_4", "n_5", "n_7", "n_4^5", "n_4^6", "n_4^9", "n_4^6'"):
            self.assertEqual(report.slack(row_id), 0, row_id)
        self.assertEqual(report.slack("n_6"), Fraction(1, 35))
        self.assertEqual(report.slack("n_4^6''"), Fraction(2, 35))
        for j in range(8, 20):
            self.assertEqual(report.slack(f"n_{j}"), Fraction(11 * (j - 7), 35), j)

    def test_certificate_feasible_for_every_n(self):
        for n in list(range(8, 201)) + [500, 1000]:
            self.assertTrue(check_feasible(build_dual(n), certificate_dual_point(n).as_assignment()).feasible, n)

    def test_dropping_x4_breaks_degree4_row(self):
        point = replace(certificate_dual_point(10), x4=Fraction(0))
        report = check_feasible(build_dual(10), point.as_assignment())
        self.assertFalse(report.feasible)
        self.assertIn("n_4", report.violated)
        self.assertEqual(report.slack("n_4"), Fraction(-1, 35))
        lhs = next(c.lhs for c in report.rows if c.row_id == "n_4")
        self.assertEqual(lhs, Fraction(71, 35))

    def test_zero_point_is_feasible(self):
        zero = {v: Fraction(0) for v in build_dual(9).variables}
        report = check_feasible(build_dual(9), zero)
        self.assertTrue(report.feasible)
        self.assertEqual(report.objective, 0)

    def test_missing_variable(self):
        with self.assertRaises(MissingVariableError):
            check_feasible(build_dual(8), {})

    def test_weak_duality_bound(self):
        self.assertEqual(weak_duality_bound(10, certificate_dual_point(10)), 22)
        self.assertEqual(weak_duality_bound(8, certificate_dual_point(8)), Fraction(88, 5))
        self.assertEqual(weak_duality_bound(20, certificate_dual_point(20)), 44)

    def test_infeasible_certificate(self):
        with self.assertRaises(InfeasibleCertificateError) as ctx:
            weak_duality_bound(10, replace(certificate_dual_point(10), x1=Fraction(3)))
        self.assertIn("n_4", ctx.exception.details["violated"])


class PrimalPointTest(SimpleTestCase):
    def test_complementary_optimum(self):
        for n in (8, 15, 30):
            point = complementary_optimum(n)
            primal = build_primal(n)
            self.assertTrue(check_feasible(primal, point).feasible, n)
            self.assertEqual(objective(primal, point), Fraction(11 * n, 5))

    def test_icosahedron_profile(self):
        icosahedron = fixture("icosahedron")
        point = profile_primal_point(degree_profile(icosahedron))
        primal = build_primal(12)
        self.assertTrue(check_feasible(primal, point).feasible)
        self.assertEqual(objective(primal, point), icosahedron.size)


class ExactSolveTest(SimpleTestCase):
    def test_primal_optimum(self):
        self.assertEqual(solve_primal_exact(8), Fraction(88, 5))
        self.assertEqual(solve_primal_exact(12), Fraction(132, 5))
        self.assertEqual(solve_primal_exact(20), 44)

    def test_primal_optimum_matches_certificate(self):
        for n in range(8, 41):
            self.assertEqual(solve_primal_exact(n), Fraction(11 * n, 5), n)

    def test_simplex_point_is_feasible(self):
        value, point = solve_exact(build_primal(10))
        self.assertEqual(value, 22)
        self.assertTrue(check_feasible(build_primal(10), point).feasible)

    def test_basis_enumeration_oracle(self):
        self.assertEqual(basic_feasible_optimum(build_primal(8)), Fraction(88, 5))

    def test_free_variables_rejected(self):
        with self.assertRaises(BadParametersError):
            solve_exact(build_dual(8))

    def test_solve_cap(self):
        with self.assertRaises(BadParametersError):
            solve_primal_exact(65)


class ReportTest(SimpleTestCase):
    def test_report(self):
        text, feasible = render_certificate_report(20)
        lines = text.splitlines()
        self.assertTrue(feasible)
        self.assertEqual(lines[0], "row-id relation lhs rhs slack")
        self.assertIn("n_6 <= 104/35 3 1/35", lines)
        self.assertIn("feasible yes", lines)
        self.assertEqual(lines[-1], "bound 44")

    def test_report_with_solve(self):
        text, _ = render_certificate_report(8, solve=True)
        self.assertEqual(text.splitlines()[-1], "optimum 88/5")
