"""
Error hierarchy for the forest-cut toolkit.

Every error carries a machine code, a human message and a details dict,
so the CLI and the Celery tasks can report failures uniformly.
"""
from typing import Any, Dict, Optional


class ForestCutError(Exception):
    """Base error: code + message + details."""

    code = "FORESTCUT_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}
        if code:
            self.code = code

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


# graph_core

class LoopEdgeError(ForestCutError):
    code = "LOOP_EDGE"


class OutOfRangeError(ForestCutError):
    code = "OUT_OF_RANGE"


class OrderTooLargeError(ForestCutError):
    code = "ORDER_TOO_LARGE"


class MalformedGraph6Error(ForestCutError):
    code = "MALFORMED_GRAPH6"


class UnsupportedOrderError(ForestCutError):
    code = "UNSUPPORTED_ORDER"


class MalformedEdgeListError(ForestCutError):
    code = "MALFORMED_EDGE_LIST"


class DisconnectedInputError(ForestCutError):
    code = "DISCONNECTED_INPUT"


# cut_search

class CompleteGraphError(ForestCutError):
    code = "COMPLETE_GRAPH"


class SearchTooLargeError(ForestCutError):
    code = "SEARCH_TOO_LARGE"


# planar

class NotSphereEmbeddingError(ForestCutError):
    code = "NOT_SPHERE_EMBEDDING"


class NotAFaceError(ForestCutError):
    code = "NOT_A_FACE"


class EdgeNotOnChosenFaceError(ForestCutError):
    code = "EDGE_NOT_ON_CHOSEN_FACE"


class MalformedRotationError(ForestCutError):
    code = "MALFORMED_ROTATION"


# constructions

class KTooSmallError(ForestCutError):
    code = "K_TOO_SMALL"


class BadParametersError(ForestCutError):
    code = "BAD_PARAMETERS"


class NotACliqueError(ForestCutError):
    code = "NOT_A_CLIQUE"


class UnknownFixtureError(ForestCutError):
    code = "UNKNOWN_FIXTURE"


# lp_certificates

class NTooSmallError(ForestCutError):
    code = "N_TOO_SMALL"


class MissingVariableError(ForestCutError):
    code = "MISSING_VARIABLE"


class InfeasibleCertificateError(ForestCutError):
    code = "INFEASIBLE_CERTIFICATE"


class LpSolveError(ForestCutError):
    """Simplex ended unbounded or infeasible; never expected for (P)."""

    code = "LP_SOLVE_FAILED"


# verify / cli

class OrderTooLargeForEnumerationError(ForestCutError):
    code = "ORDER_TOO_LARGE_FOR_ENUMERATION"


class UnsupportedCensusOrderError(ForestCutError):
    code = "UNSUPPORTED_CENSUS_ORDER"


class ThresholdSyntaxError(ForestCutError):
    code = "THRESHOLD_SYNTAX"
