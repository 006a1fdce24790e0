"""Tests for the forestcut command line, driven through ``app.forestcut.cli.run``."""
import io
import os
import tempfile

from django.test import SimpleTestCase

from app.forestcut.cli import run
from app.forestcut.services.constructions import conjecture2_family
from app.forestcut.services.graph_core import write_graph6
from app.forestcut.services.planar import embedding_fixture, parse_rotation_file, write_rotation_file


class CliTestCase(SimpleTestCase):
    def invoke(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        code = run(list(argv), stdout=out, stderr=err)
        return code, out.getvalue(), err.getvalue()

    def write_temp(self, text, suffix):
        handle, path = tempfile.mkstemp(suffix=suffix)
        with os.fdopen(handle, "w") as out:
            out.write(text)
        self.addCleanup(os.remove, path)
        return path


class CheckCommandTest(CliTestCase):
    def test_path_witness(self):
        code, out, _ = self.invoke("check", "--graph6", "Bg")
        self.assertEqual(code, 0)
        self.assertEqual(out, "forest 1 reps 0 2\n")

    def test_no_cut(self):
        self.assertEqual(self.invoke("check", "--fixture", "k4")[1], "NONE\n")
        self.assertEqual(self.invoke("check", "--fixture", "prism", "--kind", "independent")[1], "NONE\n")
        self.assertEqual(self.invoke("check", "--fixture", "octahedron", "--exhaustive")[1], "NONE\n")

    def test_edge_list_input(self):
        path = self.write_temp("4 4\n0 1\n1 2\n2 3\n3 0\n", ".edges")
        code, out, _ = self.invoke("check", "--input", path, "--format", "edges", "--kind", "independent", "--avoid", "0")
        self.assertEqual(code, 0)
        self.assertEqual(out, "independent 1,3 reps 0 2\n")

    def test_input_errors(self):
        self.assertEqual(self.invoke("check")[0], 2)
        self.assertEqual(self.invoke("check", "--fixture", "nope")[0], 2)
        self.assertEqual(self.invoke("check", "--graph6", "!!")[0], 2)
        self.assertEqual(self.invoke("check", "--input", "/nonexistent/graphs.g6")[0], 2)


class VerifyCommandTest(CliTestCase):
    def test_theorem2_builtin(self):
        code, out, _ = self.invoke("verify", "--claim", "theorem2", "--builtin-n", "6")
        self.assertEqual(code, 0)
        self.assertEqual(out, "theorem2 builtin-n6 112 0\n")

    def test_counterexamples_exit_one(self):
        code, out, _ = self.invoke(
            "verify", "--claim", "conjecture2", "--builtin-n", "5", "--conjecture2-min-order", "4"
        )
        self.assertEqual(code, 1)
        lines = out.splitlines()
        self.assertEqual(lines[0], "conjecture2 builtin-n5 21 1")
        self.assertEqual(len(lines), 2)

    def test_output_is_reproducible(self):
        first = self.invoke("verify", "--claim", "chenyu", "--random", "10", "--order", "9", "--seed", "5")
        second = self.invoke("verify", "--claim", "chenyu", "--random", "10", "--order", "9", "--seed", "5")
        self.assertEqual(first[:2], second[:2])
        self.assertTrue(first[1].startswith("chenyu random-n9-seed5-count10 10 "))

    def test_graph6_corpus(self):
        path = self.write_temp("C~\nBg\n", ".g6")
        code, out, _ = self.invoke("verify", "--claim", "conjecture1", "--input", path)
        self.assertEqual(code, 0)
        self.assertTrue(out.endswith(" 2 0\n"))

    def test_usage_errors(self):
        self.assertEqual(self.invoke("verify", "--claim", "theorem2")[0], 2)
        self.assertEqual(self.invoke("verify", "--claim", "theorem2", "--builtin-n", "9")[0], 2)
        self.assertEqual(self.invoke("verify", "--claim", "theorem2", "--input", "/nonexistent.g6")[0], 2)
        self.assertEqual(self.invoke("verify", "--claim", "conjecture7", "--builtin-n", "5")[0], 2)
        self.assertEqual(self.invoke("verify", "--claim", "theorem2", "--builtin-n", "5", "--workers", "0")[0], 2)


class GenCommandTest(CliTestCase):
    def test_conjecture2_family(self):
        code, out, _ = self.invoke("gen", "--family", "gk", "--k", "1", "--format", "graph6")
        self.assertEqual(code, 0)
        self.assertEqual(out, write_graph6(conjecture2_family(1)) + "\n")

    def test_fixture_rotation(self):
        code, out, _ = self.invoke("gen", "--family", "fixture", "--name", "k4", "--format", "rot")
        self.assertEqual(code, 0)
        self.assertEqual(parse_rotation_file(out), embedding_fixture("k4").embedding)

    def test_stacked_edges(self):
        code, out, _ = self.invoke("gen", "--family", "stacked", "--n", "9", "--seed", "3", "--format", "edges")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], "9 21")

    def test_glue(self):
        code, out, _ = self.invoke(
            "gen", "--family", "glue", "--left", "octahedron", "--right", "octahedron",
            "--clique-a", "0,1,2", "--clique-b", "0,1,2", "--format", "edges",
        )
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], "9 21")

    def test_usage_errors(self):
        self.assertEqual(self.invoke("gen", "--family", "band", "--n", "7", "--c", "4")[0], 2)
        self.assertEqual(self.invoke("gen", "--family", "gk")[0], 2)
        self.assertEqual(self.invoke("gen", "--family", "cdu", "--k", "3", "--format", "rot")[0], 2)
        self.assertEqual(self.invoke(
            "gen", "--family", "glue", "--left", "k4", "--right", "k4", "--clique-a", "0,1", "--clique-b", "0,1,2",
        )[0], 2)


class PlanarCutCommandTest(CliTestCase):
    def test_k4(self):
        code, out, _ = self.invoke("planar-cut", "--fixture", "k4", "--edge", "0,1")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines(), ["cut 2,3", "path 0,3,1", "forest-cut yes"])

    def test_rotation_file(self):
        path = self.write_temp(write_rotation_file(embedding_fixture("icosahedron").embedding), ".rot")
        code, out, _ = self.invoke("planar-cut", "--input", path, "--edge", "0,1")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[-1], "forest-cut yes")

    def test_bad_edge(self):
        self.assertEqual(self.invoke("planar-cut", "--fixture", "octahedron", "--edge", "1,3")[0], 2)
        self.assertEqual(self.invoke("planar-cut", "--fixture", "k4", "--edge", "0,1", "--face", "0,2,3")[0], 2)
        self.assertEqual(self.invoke("planar-cut", "--fixture", "k4", "--edge", "0-1")[0], 2)


class LpCommandTest(CliTestCase):
    def test_certificate(self):
        code, out, _ = self.invoke("lp", "--n", "20")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[-1], "bound 44")

    def test_solve(self):
        code, out, _ = self.invoke("lp", "--n", "8", "--solve")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[-1], "optimum 88/5")

    def test_small_n(self):
        self.assertEqual(self.invoke("lp", "--n", "7")[0], 2)


class EnumerateAndAuditCommandTest(CliTestCase):
    def test_census_filter(self):
        code, out, _ = self.invoke("enumerate", "--n", "6", "--min-connectivity", "3", "--max-edges-lt", "11/5n-18/5")
        self.assertEqual(code, 0)
        self.assertEqual(len(out.splitlines()), 2)

    def test_bad_threshold(self):
        self.assertEqual(self.invoke("enumerate", "--n", "5", "--max-edges-lt", "abc")[0], 2)

    def test_audit(self):
        code, out, _ = self.invoke("audit", "--fixture", "octahedron")
        self.assertEqual(code, 0)
        self.assertIn("partition_valid fails", out.splitlines())

    def test_audit_large_edge_list(self):
        edges = "".join(f"{i} {i + 1}\n" for i in range(69))
        path = self.write_temp(f"70 69\n{edges}", ".edges")
        code, out, _ = self.invoke("audit", "--input", path, "--format", "edges")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], "audit - n=70 m=69")

    def test_unknown_subcommand(self):
        self.assertEqual(self.invoke("frobnicate")[0], 2)
