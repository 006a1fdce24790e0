"""
Tests for the forest / independent cut finders.

The production finders are cross-checked against the exhaustive oracle on
every connected graph of order <= 6 and on seeded random graphs.
"""
from django.test import SimpleTestCase

from app.forestcut.exceptions import CompleteGraphError, DisconnectedInputError, OutOfRangeError, SearchTooLargeError
from app.forestcut.services.constructions import (
    clique_glue,
    conjecture2_family,
    cycle_diagonals_universal,
    fixture,
    k3_band_cycle,
)
from app.forestcut.domain.schemas import GlueSpec
from app.forestcut.services.cut_search import (
    CutKind,
    CutWitness,
    all_minimal_forest_cuts,
    enumerate_minimal_separators,
    find_forest_cut,
    find_forest_cut_exhaustive,
    find_independent_cut,
    find_independent_cut_avoiding,
    find_independent_cut_exhaustive,
    forest_cut_free_necessary_conditions,
    universal_vertex_reduction,
    validate_witness,
)
from app.forestcut.services.graph_core import VertexSet, build_graph, induced_is_forest, is_vertex_cut
from app.forestcut.services.verify import enumerate_connected_graphs, random_connected_graph


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


class ExhaustiveOracleTest(SimpleTestCase):
    def test_path_has_middle_vertex_cut(self):
        p3 = build_graph(3, [(0, 1), (1, 2)])
        witness = find_forest_cut_exhaustive(p3)
        self.assertEqual(witness.cut, VertexSet.of([1]))
        self.assertEqual(witness.describe(), "forest 1 reps 0 2")
        self.assertTrue(validate_witness(p3, witness))

    def test_complete_graphs_have_no_cut(self):
        for name in ("k3", "k4"):
            self.assertIsNone(find_forest_cut_exhaustive(fixture(name)))
            self.assertIsNone(find_independent_cut_exhaustive(fixture(name)))

    def test_k5_minus_edge_is_forest_cut_free(self):
        self.assertIsNone(find_forest_cut_exhaustive(fixture("k5_minus_edge")))

    def test_octahedron_is_forest_cut_free(self):
        self.assertIsNone(find_forest_cut_exhaustive(fixture("octahedron")))

    def test_order_cap(self):
        with self.assertRaises(SearchTooLargeError):
            find_forest_cut_exhaustive(cycle(10), max_order=8)

    def test_disconnected_input(self):
        with self.assertRaises(DisconnectedInputError):
            find_forest_cut_exhaustive(build_graph(4, [(0, 1), (2, 3)]))


class MinimalSeparatorTest(SimpleTestCase):
    def test_cycle_separators_are_antipodal_pairs(self):
        separators = list(enumerate_minimal_separators(cycle(5)))
        self.assertEqual(len(separators), 5)
        self.assertTrue(all(len(s) == 2 for s in separators))
        self.assertEqual(len(set(separators)), 5)

    def test_every_separator_is_inclusion_minimal(self):
        g = random_connected_graph(9, seed=3)
        for separator in enumerate_minimal_separators(g):
            self.assertTrue(is_vertex_cut(g, separator))
            for v in separator:
                self.assertFalse(is_vertex_cut(g, separator.without_vertex(v)))

    def test_complete_graph_rejected(self):
        with self.assertRaises(CompleteGraphError):
            list(enumerate_minimal_separators(fixture("k4")))

    def test_universal_vertex_in_every_cut(self):
        for k in (3, 4):
            g = cycle_diagonals_universal(k)
            for separator in enumerate_minimal_separators(g):
                self.assertIn(2 * k, separator)


class ProductionFinderTest(SimpleTestCase):
    def _assert_agrees(self, g):
        production = find_forest_cut(g)
        oracle = find_forest_cut_exhaustive(g)
        self.assertEqual(production is None, oracle is None, g.edges())
        if production is not None:
            self.assertTrue(validate_witness(g, production), g.edges())
        independent = find_independent_cut(g)
        self.assertEqual(independent is None, find_independent_cut_exhaustive(g) is None, g.edges())
        if independent is not None:
            self.assertTrue(validate_witness(g, independent), g.edges())

    def test_agrees_with_oracle_on_small_graphs(self):
        for n in range(3, 7):
            for g in enumerate_connected_graphs(n):
                self._assert_agrees(g)

    def test_forest_cut_agrees_on_order_seven(self):
        for g in enumerate_connected_graphs(7):
            self.assertEqual(find_forest_cut(g) is None, find_forest_cut_exhaustive(g) is None, g.edges())

    def test_figure_graphs_have_forest_cuts(self):
        for name in ("fig1_a", "fig1_b", "fig1_c", "fig1_d"):
            witness = find_forest_cut(fixture(name))
            self.assertIsNotNone(witness, name)
            self.assertTrue(validate_witness(fixture(name), witness), name)

    def test_agrees_with_oracle_on_random_graphs(self):
        for seed in range(200):
            order = 3 + seed % 10
            density = (0.2, 0.35, 0.5, 0.7)[seed % 4]
            self._assert_agrees(random_connected_graph(order, seed=seed, density=density))

    def test_avoiding_agrees_with_oracle(self):
        for g in enumerate_connected_graphs(5):
            for u in range(g.order):
                production = find_independent_cut_avoiding(g, u)
                oracle = find_independent_cut_exhaustive(g, avoid_vertex=u)
                self.assertEqual(production is None, oracle is None)
                if production is not None:
                    self.assertNotIn(u, production.cut)
                    self.assertTrue(validate_witness(g, production))

    def test_avoiding_vertex_out_of_range(self):
        with self.assertRaises(OutOfRangeError):
            find_independent_cut_avoiding(fixture("k4"), 7)

    def test_forest_cut_free_fixtures(self):
        for name in ("k3", "k4", "k5_minus_edge", "octahedron", "icosahedron"):
            self.assertIsNone(find_forest_cut(fixture(name)), name)

    def test_conjecture2_family_has_hub_forest_cut(self):
        # {hub, u_0, u_3} splits the ring; the necessary conditions still hold
        g = conjecture2_family(1)
        witness = find_forest_cut(g)
        self.assertIsNotNone(witness)
        self.assertIn(6, witness.cut)
        self.assertTrue(validate_witness(g, witness))
        self.assertTrue(is_vertex_cut(g, VertexSet.of([0, 3, 6])))

    def test_universal_vertex_graph_uses_reduction(self):
        g = cycle_diagonals_universal(3)
        witness = find_forest_cut(g)
        self.assertIsNotNone(witness)
        self.assertIn(6, witness.cut)
        self.assertTrue(validate_witness(g, witness))

    def test_prism_has_no_independent_cut(self):
        self.assertIsNone(find_independent_cut(fixture("prism")))

    def test_glued_k5_minus_edge_is_forest_cut_free(self):
        base = fixture("k5_minus_edge")
        glued = clique_glue(base, base, GlueSpec(clique_a=(0, 1, 2, 3), clique_b=(0, 1, 2, 3)))
        self.assertEqual((glued.order, glued.size), (6, 12))
        self.assertIsNone(find_forest_cut(glued))
        self.assertIsNone(find_forest_cut_exhaustive(glued))

    def test_validate_rejects_bad_witness(self):
        p3 = build_graph(3, [(0, 1), (1, 2)])
        wrong_side = CutWitness(VertexSet.of([1]), 0, 0, CutKind.FOREST)
        self.assertFalse(validate_witness(p3, wrong_side))
        not_a_cut = CutWitness(VertexSet.of([0]), 1, 2, CutKind.FOREST)
        self.assertFalse(validate_witness(p3, not_a_cut))


class MinimalForestCutListTest(SimpleTestCase):
    def test_band_cycle_small_side_only(self):
        for n, c in ((8, 3), (8, 4), (9, 3), (9, 4), (9, 5)):
            cuts = all_minimal_forest_cuts(k3_band_cycle(n, c))
            self.assertEqual(cuts, [VertexSet.of([0, 1, 2])], (n, c))

    def test_path_cuts(self):
        p4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])
        self.assertEqual(all_minimal_forest_cuts(p4), [VertexSet.of([1]), VertexSet.of([2])])


class NecessaryConditionTest(SimpleTestCase):
    def test_forest_cut_free_graphs_pass(self):
        for name in ("k4", "k5_minus_edge", "octahedron", "icosahedron"):
            self.assertTrue(forest_cut_free_necessary_conditions(fixture(name)), name)
        for k in (1, 2, 3):
            self.assertTrue(forest_cut_free_necessary_conditions(conjecture2_family(k)), k)

    def test_weak_graphs_fail(self):
        self.assertFalse(forest_cut_free_necessary_conditions(cycle(6)))
        self.assertFalse(forest_cut_free_necessary_conditions(fixture("k33")))


class UniversalVertexReductionTest(SimpleTestCase):
    def test_wheel_reduces_to_its_rim(self):
        hub, rim = universal_vertex_reduction(fixture("wheel5"))
        self.assertEqual(hub, 4)
        self.assertEqual(rim, cycle(4))

    def test_cycle_has_no_universal_vertex(self):
        self.assertIsNone(universal_vertex_reduction(cycle(5)))

    def test_complete_graph_drops_lowest_vertex(self):
        u, rest = universal_vertex_reduction(fixture("k4"))
        self.assertEqual(u, 0)
        self.assertEqual(rest, fixture("k3"))

    def test_wheel_forest_cut_contains_hub(self):
        g = fixture("wheel5")
        witness = find_forest_cut(g)
        self.assertIsNotNone(witness)
        self.assertIn(4, witness.cut)
        self.assertIn(witness.cut - VertexSet.of([4]), (VertexSet.of([0, 2]), VertexSet.of([1, 3])))
        self.assertTrue(validate_witness(g, witness))


class MonotoneClosureTest(SimpleTestCase):
    def test_cut_inside_forest_cut_is_forest_cut(self):
        for n in range(3, 7):
            for g in enumerate_connected_graphs(n):
                for bits in range(1, 1 << n):
                    forest_cut = VertexSet(bits)
                    if not (is_vertex_cut(g, forest_cut) and induced_is_forest(g, forest_cut)):
                        continue
                    sub = (bits - 1) & bits
                    while sub:
                        smaller = VertexSet(sub)
                        if is_vertex_cut(g, smaller):
                            self.assertTrue(induced_is_forest(g, smaller), (g.edges(), sub))
                        sub = (sub - 1) & bits
