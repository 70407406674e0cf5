"""Deterministic experiment assignment: a small DSL, a salted-hash
interpreter, namespace-based experiment management, exposure logging, and
a Monte-Carlo simulator for verifying assignment distributions."""

from . import corpus, errors
from .dsl import decompile, parse, parse_or_raise
from .exposure import CustomEvent, ExposureEvent, ExposureLogger, parse_record
from .interpreter import Assignment, AssignmentCache, evaluate
from .ir import (
    Diagnostic,
    ScriptIR,
    deserialize,
    list_parameters,
    list_units,
    script_digest,
    serialize,
    validate,
)
from .namespaces import (
    Namespace,
    NamespaceStore,
    ParameterView,
    segment_of,
)
from .overrides import format_override_string, parse_override_string
from .random_ops import HashDraw, SaltContext, hash_draw
from .simulator import SimulationReport, chi_square, independence_table, simulate

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AssignmentCache",
    "CustomEvent",
    "Diagnostic",
    "ExposureEvent",
    "ExposureLogger",
    "HashDraw",
    "Namespace",
    "NamespaceStore",
    "ParameterView",
    "SaltContext",
    "ScriptIR",
    "SimulationReport",
    "chi_square",
    "corpus",
    "decompile",
    "deserialize",
    "errors",
    "evaluate",
    "format_override_string",
    "hash_draw",
    "independence_table",
    "list_parameters",
    "list_units",
    "parse",
    "parse_or_raise",
    "parse_override_string",
    "parse_record",
    "script_digest",
    "segment_of",
    "serialize",
    "simulate",
    "validate",
]
