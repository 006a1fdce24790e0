"""
Linha de comando do toolkit: cortes, enumeração, verificação de conjecturas,
geradores, corte planar, certificados LP e auditoria.

Saída padrão só com resultados (idêntica entre execuções); logs vão para stderr.
Exit code: 0 ok, 1 contraexemplos encontrados, 2 erro de uso/entrada.
"""

import sys
from pathlib import Path
from typing import Iterator, Tuple

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from app.forestcut.domain.schemas import CliConfig, GlueSpec
from app.forestcut.exceptions import ForestCutError
from app.forestcut.services import constructions, lp_certificates, planar, verify
from app.forestcut.services.cut_search import (
    find_forest_cut,
    find_forest_cut_exhaustive,
    find_independent_cut,
    find_independent_cut_avoiding,
    find_independent_cut_exhaustive,
)
from app.forestcut.services.graph_core import (
    Graph,
    induced_is_forest,
    is_vertex_cut,
    parse_edge_list,
    parse_graph6,
    remove_edge,
    vertex_connectivity_at_least,
    write_edge_list,
    write_graph6,
)

USAGE_ERROR = 2
CLAIMS = ("conjecture1", "theorem2", "chenyu", "theorem1", "conjecture2")
FAMILIES = ("fixture", "gk", "band", "cdu", "glue", "stacked")


def _int_tuple(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise CommandError(f"expected comma-separated integers, got {text!r}", returncode=USAGE_ERROR)


class Command(BaseCommand):
    help = "Cortes-floresta e cortes independentes: verificação, geradores e certificados"
    requires_system_checks = []

    exit_code = 0

    def add_arguments(self, parser):
        sub = parser.add_subparsers(dest="subcommand", required=True)

        def graph_source(p, formats=("graph6", "edges")):
            p.add_argument("--input", help="arquivo de entrada")
            p.add_argument("--format", dest="input_format", choices=formats, default=formats[0])
            p.add_argument("--graph6", help="um grafo em graph6 na própria linha de comando")
            p.add_argument("--fixture", help="grafo nomeado (k4, prism, fig1_c, ...)")

        check = sub.add_parser("check", help="procura corte-floresta ou corte independente")
        graph_source(check)
        check.add_argument("--kind", choices=("forest", "independent"), default="forest")
        check.add_argument("--avoid", type=int, help="vértice que o corte independente deve evitar")
        check.add_argument("--exhaustive", action="store_true", help="usa o oráculo exaustivo")

        enum = sub.add_parser("enumerate", help="enumeração de grafos conexos (n <= 7) com filtros")
        enum.add_argument("--n", type=int, required=True)
        enum.add_argument("--min-connectivity", type=int, default=1)
        enum.add_argument("--max-edges-lt", help="limiar racional, ex. 11/5n-18/5")
        enum.add_argument("--output", dest="output_format", choices=("graph6", "edges"), default="graph6")

        ver = sub.add_parser("verify", help="verifica uma afirmação sobre um corpus")
        ver.add_argument("--claim", choices=CLAIMS, required=True)
        ver.add_argument("--builtin-n", type=int)
        ver.add_argument("--input", help="corpus graph6")
        ver.add_argument("--random", type=int, help="quantidade de grafos aleatórios conexos")
        ver.add_argument("--order", type=int, default=8)
        ver.add_argument("--seed", type=int, default=settings.FORESTCUT_SEED)
        ver.add_argument("--workers", type=int, default=settings.FORESTCUT_WORKERS)
        ver.add_argument("--dispatch", choices=("local", "celery"), default=settings.FORESTCUT_DISPATCH)
        ver.add_argument("--chunk-size", type=int, default=settings.FORESTCUT_CHUNK_SIZE)
        ver.add_argument("--conjecture2-min-order", type=int, default=settings.FORESTCUT_CONJECTURE2_MIN_ORDER)

        gen = sub.add_parser("gen", help="gera famílias extremais e fixtures")
        gen.add_argument("--family", choices=FAMILIES, required=True)
        gen.add_argument("--name")
        gen.add_argument("--k", type=int)
        gen.add_argument("--n", type=int)
        gen.add_argument("--c", type=int)
        gen.add_argument("--seed", type=int, default=settings.FORESTCUT_SEED)
        gen.add_argument("--left")
        gen.add_argument("--right")
        gen.add_argument("--clique-a")
        gen.add_argument("--clique-b")
        gen.add_argument("--format", dest="output_format", choices=("graph6", "edges", "rot"), default="graph6")

        cut = sub.add_parser("planar-cut", help="corte-floresta de T - xy numa triangulação plana")
        cut.add_argument("--input", help="arquivo de rotações")
        cut.add_argument("--fixture", help="k3, k4, octahedron ou icosahedron")
        cut.add_argument("--edge", required=True)
        cut.add_argument("--face")

        lp = sub.add_parser("lp", help="certificado dual exato do programa de perfis de grau")
        lp.add_argument("--n", type=int, required=True)
        lp.add_argument("--solve", action="store_true", help="também resolve (P) com simplex exato")

        audit = sub.add_parser("audit", help="desigualdades de perfil de grau num grafo")
        graph_source(audit)

    def run_from_argv(self, argv):
        super().run_from_argv(argv)
        if self.exit_code:
            sys.exit(self.exit_code)

    def handle(self, *args, **options):
        subcommand = options["subcommand"]
        self.exit_code = 0
        try:
            self.config = CliConfig(
                subcommand=subcommand,
                input_path=options.get("input"),
                input_format=options.get("input_format") or "graph6",
                output_format=options.get("output_format") or "report",
                seed=settings.FORESTCUT_SEED if options.get("seed") is None else options["seed"],
                workers=settings.FORESTCUT_WORKERS if options.get("workers") is None else options["workers"],
            )
            getattr(self, "_" + subcommand.replace("-", "_"))(options)
        except ForestCutError as exc:
            raise CommandError(f"{exc.code}: {exc.message}", returncode=USAGE_ERROR) from exc
        except ValidationError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        except OSError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc

    # ------------------------------------------------------------ inputs

    def _graphs(self, options) -> Iterator[Graph]:
        sources = [options.get(k) for k in ("input", "graph6", "fixture")]
        if sum(s is not None for s in sources) != 1:
            raise CommandError("give exactly one of --input, --graph6, --fixture", returncode=USAGE_ERROR)
        if options.get("graph6"):
            yield parse_graph6(options["graph6"])
        elif options.get("fixture"):
            yield constructions.fixture(options["fixture"])
        elif self.config.input_format == "edges":
            yield parse_edge_list(Path(options["input"]).read_text())
        else:
            lines = [ln.strip() for ln in Path(options["input"]).read_text().splitlines()]
            for line in lines:
                if line:
                    yield parse_graph6(line)

    def _emit(self, graph: Graph, output_format: str) -> None:
        if output_format == "edges":
            self.stdout.write(write_edge_list(graph), ending="")
        else:
            self.stdout.write(write_graph6(graph))

    # ------------------------------------------------------------ subcommands

    def _check(self, options):
        cap = settings.FORESTCUT_EXHAUSTIVE_MAX_ORDER
        for graph in self._graphs(options):
            avoid = options.get("avoid")
            if options["kind"] == "forest":
                witness = (
                    find_forest_cut_exhaustive(graph, max_order=cap)
                    if options["exhaustive"] else find_forest_cut(graph)
                )
            elif avoid is not None:
                witness = (
                    find_independent_cut_exhaustive(graph, avoid_vertex=avoid, max_order=cap)
                    if options["exhaustive"] else find_independent_cut_avoiding(graph, avoid)
                )
            else:
                witness = (
                    find_independent_cut_exhaustive(graph, max_order=cap)
                    if options["exhaustive"] else find_independent_cut(graph)
                )
            self.stdout.write(witness.describe() if witness else "NONE")

    def _enumerate(self, options):
        n = options["n"]
        threshold = verify.parse_threshold(options["max_edges_lt"]) if options.get("max_edges_lt") else None
        k = options["min_connectivity"]
        for graph in verify.enumerate_connected_graphs(n):
            if threshold is not None and not graph.size < threshold(n):
                continue
            if k > 1 and not vertex_connectivity_at_least(graph, k):
                continue
            self._emit(graph, self.config.output_format)

    def _verify(self, options):
        sources = [options.get(k) is not None for k in ("builtin_n", "input", "random")]
        if sum(sources) != 1:
            raise CommandError("give exactly one of --builtin-n, --input, --random", returncode=USAGE_ERROR)
        if options.get("builtin_n") is not None:
            graphs = verify.enumerate_connected_graphs(options["builtin_n"])
            corpus = f"builtin-n{options['builtin_n']}"
        elif options.get("input"):
            if not Path(options["input"]).is_file():
                raise CommandError(f"no such corpus file: {options['input']}", returncode=USAGE_ERROR)
            graphs = verify.ingest_graph6(options["input"])
            corpus = Path(options["input"]).name
        else:
            graphs = [
                verify.random_connected_graph(options["order"], self.config.seed + i)
                for i in range(options["random"])
            ]
            corpus = f"random-n{options['order']}-seed{self.config.seed}-count{options['random']}"
        report = verify.run_claim(
            options["claim"],
            graphs,
            corpus,
            workers=self.config.workers,
            dispatch=options["dispatch"],
            chunk_size=options["chunk_size"],
            conjecture2_min_order=options["conjecture2_min_order"],
        )
        self.stdout.write(report.render(), ending="")
        self.exit_code = 0 if report.ok else 1

    def _gen(self, options):
        family = options["family"]

        def need(*names):
            missing = [n for n in names if options.get(n) is None]
            if missing:
                raise CommandError(
                    f"--family {family} needs " + ", ".join("--" + m.replace("_", "-") for m in missing),
                    returncode=USAGE_ERROR,
                )

        triangulation = None
        if family == "fixture":
            need("name")
            if options["name"] in planar.EMBEDDING_TRIANGLES:
                triangulation = planar.embedding_fixture(options["name"])
            graph = constructions.fixture(options["name"])
        elif family == "gk":
            need("k")
            graph = constructions.conjecture2_family(options["k"])
        elif family == "band":
            need("n", "c")
            graph = constructions.k3_band_cycle(options["n"], options["c"])
        elif family == "cdu":
            need("k")
            graph = constructions.cycle_diagonals_universal(options["k"])
        elif family == "stacked":
            need("n")
            triangulation = planar.random_stacked_triangulation(options["n"], self.config.seed)
            graph = triangulation.graph
        else:
            need("left", "right", "clique_a", "clique_b")
            spec = GlueSpec(clique_a=_int_tuple(options["clique_a"]), clique_b=_int_tuple(options["clique_b"]))
            graph = constructions.clique_glue(
                constructions.fixture(options["left"]), constructions.fixture(options["right"]), spec
            )
        if self.config.output_format == "rot":
            if triangulation is None:
                raise CommandError(f"--format rot needs an embedded family, not {family}", returncode=USAGE_ERROR)
            self.stdout.write(planar.write_rotation_file(triangulation.embedding), ending="")
        else:
            self._emit(graph, self.config.output_format)

    def _planar_cut(self, options):
        if (options.get("input") is None) == (options.get("fixture") is None):
            raise CommandError("give exactly one of --input, --fixture", returncode=USAGE_ERROR)
        if options.get("fixture"):
            triangulation = planar.embedding_fixture(options["fixture"])
        else:
            rotation = planar.parse_rotation_file(Path(options["input"]).read_text())
            triangulation = planar.PlaneTriangulation(rotation, planar.faces(rotation)[0])
        edge = _int_tuple(options["edge"])
        face = _int_tuple(options["face"]) if options.get("face") else None
        if len(edge) != 2:
            raise CommandError("--edge takes u,v", returncode=USAGE_ERROR)
        trace = planar.planar_cut_trace(triangulation, edge, face)
        reduced = remove_edge(triangulation.graph, *edge)
        valid = is_vertex_cut(reduced, trace.cut) and induced_is_forest(reduced, trace.cut)
        self.stdout.write(f"cut {','.join(map(str, trace.cut))}")
        self.stdout.write(f"path {','.join(map(str, trace.path))}")
        self.stdout.write(f"forest-cut {'yes' if valid else 'no'}")
        self.exit_code = 0 if valid else 1

    def _lp(self, options):
        text, feasible = lp_certificates.render_certificate_report(options["n"], solve=options["solve"])
        self.stdout.write(text, ending="")
        self.exit_code = 0 if feasible else 1

    def _audit(self, options):
        for graph in self._graphs(options):
            self.stdout.write(verify.audit_claim_inequalities(graph).render(), ending="")
