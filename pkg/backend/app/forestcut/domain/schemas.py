"""
Schemas Pydantic: configuração da CLI, relatórios de verificação, auditoria
e especificação de colagem de cliques.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


class GlueSpec(BaseModel):
    """Vertex tuples identified pairwise: clique_b[i] becomes clique_a[i]."""

    clique_a: Tuple[int, ...]
    clique_b: Tuple[int, ...]

    @model_validator(mode="after")
    def validate_shape(self):
        if len(self.clique_a) != len(self.clique_b):
            raise ValueError("clique_a and clique_b must have the same length")
        if len(self.clique_a) not in (2, 3, 4):
            raise ValueError("cliques are glued along K2, K3 or K4")
        for clique in (self.clique_a, self.clique_b):
            if len(set(clique)) != len(clique):
                raise ValueError("clique vertices must be distinct")
            if any(v < 0 for v in clique):
                raise ValueError("vertex ids are non-negative")
        return self

    @property
    def size(self) -> int:
        return len(self.clique_a)


class CliConfig(BaseModel):
    """Parsed command line; workers/seed defaults come from settings."""

    subcommand: Literal["check", "enumerate", "verify", "gen", "planar-cut", "lp", "audit"]
    input_path: Optional[str] = None
    input_format: Literal["graph6", "edges", "rot"] = "graph6"
    output_format: Literal["graph6", "edges", "rot", "report"] = "report"
    seed: int = 1
    workers: int = Field(1, ge=1)


class CheckReport(BaseModel):
    """Result of one claim checker over one corpus."""

    claim: str
    corpus: str
    scanned: int = 0
    counterexamples: List[str] = Field(default_factory=list)
    malformed: int = 0
    elapsed_ms: Optional[float] = Field(None, exclude=True)

    @field_validator("counterexamples")
    @classmethod
    def canonical_order(cls, v: List[str]) -> List[str]:
        return sorted(set(v))

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "CheckReport") -> "CheckReport":
        """Commutative merge of two partial reports on the same claim."""
        return CheckReport(
            claim=self.claim,
            corpus=self.corpus,
            scanned=self.scanned + other.scanned,
            counterexamples=self.counterexamples + other.counterexamples,
            malformed=self.malformed + other.malformed,
            elapsed_ms=None,
        )

    def render(self) -> str:
        lines = [f"{self.claim} {self.corpus} {self.scanned} {len(self.counterexamples)}"]
        lines += self.counterexamples
        return "\n".join(lines) + "\n"


class AuditRecord(BaseModel):
    """Degree-profile inequalities and neighbourhood claims evaluated on one graph.

    graph6 is None above the short-form order limit.
    """

    graph6: Optional[str] = None
    order: int
    size: int
    partition_valid: bool
    degree_sum_row: bool
    five_row: bool
    six_row: bool
    j_rows: bool
    min_degree_at_least_4: bool
    four_connected: bool
    degree4_neighbourhood_sum_ok: bool
    degree4_at_most_two_degree4_neighbours: bool
    degree4_not_all_neighbours_degree4: bool
    degree5_has_non4_neighbour: bool
    primal_feasible: bool
    objective_matches_size: bool

    def render(self) -> str:
        flags = self.model_dump(exclude={"graph6", "order", "size"})
        lines = [f"audit {self.graph6 or '-'} n={self.order} m={self.size}"]
        lines += [f"{name} {'holds' if value else 'fails'}" for name, value in flags.items()]
        return "\n".join(lines) + "\n"
