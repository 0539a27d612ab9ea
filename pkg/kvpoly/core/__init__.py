"""
kvpoly Core Modules

Laurent arithmetic, the diagram model, hyperbolic orientations, invariants,
the skein oracle, the corpus and its acceptance properties.
"""

from . import utils
from .config import ConfigManager
from .corpus import CheckResult, CorpusEntry, CorpusError, check_entry, load_manifest
from .diagram import Diagram, DiagramError, load_diagram, parse_diagram, serialize_diagram
from .invariant import (
    InvariantReport,
    braces,
    bracket,
    compute_report,
    normalized,
    one_crossing_test,
    partition_classes,
    planar_value,
    planarity_obstruction,
)
from .laurent import LaurentPolynomial, PolynomialError, lp_parse
from .orientation import enumerate_hyperbolic, hyperbolic_state_sum, is_separable, twisting_number, writhe
from .properties import CheckSettings, run_checks
from .skein import ExpansionLimitError, oracle_bracket, skein_residual

__all__ = [
    "ConfigManager",
    "CheckResult",
    "CheckSettings",
    "CorpusEntry",
    "CorpusError",
    "Diagram",
    "DiagramError",
    "ExpansionLimitError",
    "InvariantReport",
    "LaurentPolynomial",
    "PolynomialError",
    "braces",
    "bracket",
    "check_entry",
    "compute_report",
    "enumerate_hyperbolic",
    "hyperbolic_state_sum",
    "is_separable",
    "load_diagram",
    "load_manifest",
    "lp_parse",
    "normalized",
    "one_crossing_test",
    "oracle_bracket",
    "parse_diagram",
    "partition_classes",
    "planar_value",
    "planarity_obstruction",
    "run_checks",
    "serialize_diagram",
    "skein_residual",
    "twisting_number",
    "utils",
    "writhe",
]
