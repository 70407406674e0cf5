"""Intermediate representation of assignment scripts.

The IR is a JSON-compatible tree of ``{"op": ...}`` nodes wrapped in a
ScriptIR.  Canonical serialization (sorted keys, compact separators) makes
equal IRs produce byte-equal text; the schema is documented in
docs/ir_format.md and versioned through "format-version".

Scalar literals (numbers, strings, booleans, null) appear directly in the
tree; everything else is a node dict.  Statements:

    {"op": "set", "var": name, "value": EXPR}
    {"op": "if", "branches": [{"cond": EXPR, "body": [STMT...]}, ...],
     "else": [STMT...]}                      # "else" optional
    {"op": "return"}                         # "value" optional

Expressions:

    {"op": "array", "values": [EXPR...]}
    {"op": "get", "var": name}
    {"op": "index", "base": EXPR, "index": EXPR}
    {"op": OP, "lhs": EXPR, "rhs": EXPR}     # add sub mul div mod
                                             # eq ne lt le gt ge and or
    {"op": "not"|"neg", "value": EXPR}
    {"op": NAME, "args": {kw: EXPR, ...}}    # registered random operator
    {"op": NAME, "values": [EXPR...]}        # registered builtin function
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import registry
from .errors import ParseError, SchemaError

FORMAT_VERSION = "1"

BINARY_OPS = frozenset(
    ["add", "sub", "mul", "div", "mod",
     "eq", "ne", "lt", "le", "gt", "ge", "and", "or"])
UNARY_OPS = frozenset(["not", "neg"])


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    offset: int | None = None

    @property
    def is_error(self):
        return self.severity == "error"


@dataclass(frozen=True)
class ScriptIR:
    """Immutable after construction; safe to share across evaluations."""

    root: tuple = ()
    format_version: str = FORMAT_VERSION

    def __init__(self, root=(), format_version=FORMAT_VERSION):
        # Stored as a plain tuple of node dicts; the dicts themselves are
        # treated as immutable by convention.
        object.__setattr__(self, "root", tuple(root))
        object.__setattr__(self, "format_version", format_version)

    def __eq__(self, other):
        if not isinstance(other, ScriptIR):
            return NotImplemented
        return (self.format_version == other.format_version
                and list(self.root) == list(other.root))

    def __hash__(self):
        return hash(serialize(self))


def serialize(ir: ScriptIR) -> str:
    """Canonical text: sorted keys, compact separators, byte-stable."""
    doc = {"format-version": ir.format_version, "root": list(ir.root)}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def script_digest(ir: ScriptIR) -> str:
    return hashlib.sha1(serialize(ir).encode("utf-8")).hexdigest()


def deserialize(text: str) -> ScriptIR:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed serialized script: {exc.msg}",
                         offset=exc.pos) from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if "root" not in doc:
        raise SchemaError("missing top-level field 'root'")
    version = doc.get("format-version")
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format-version: {version!r}")
    root = doc["root"]
    if not isinstance(root, list):
        raise SchemaError("'root' must be a list of statements")
    for stmt in root:
        _check_stmt(stmt)
    return ScriptIR(root=root, format_version=version)


def _node_op(node):
    if not isinstance(node, dict):
        raise SchemaError(f"expected a node object, got {type(node).__name__}")
    op = node.get("op")
    if not isinstance(op, str):
        raise SchemaError("node missing string 'op' field")
    return op


def _require(node, op, *fields):
    for name in fields:
        if name not in node:
            raise SchemaError(f"{op!r} node missing field {name!r}",
                              node_kind=op)


def _check_stmt(node):
    op = _node_op(node)
    if op == "set":
        _require(node, op, "var", "value")
        if not isinstance(node["var"], str):
            raise SchemaError("'set' var must be a string", node_kind=op)
        _check_expr(node["value"])
    elif op == "if":
        _require(node, op, "branches")
        branches = node["branches"]
        if not isinstance(branches, list) or not branches:
            raise SchemaError("'if' needs at least one branch", node_kind=op)
        for branch in branches:
            if not isinstance(branch, dict):
                raise SchemaError("'if' branch must be an object",
                                  node_kind=op)
            _require(branch, "if-branch", "cond", "body")
            _check_expr(branch["cond"])
            _check_body(branch["body"])
        if "else" in node:
            _check_body(node["else"])
    elif op == "return":
        if "value" in node:
            _check_expr(node["value"])
    else:
        raise SchemaError(f"unknown statement kind {op!r}", node_kind=op)


def _check_body(body):
    if not isinstance(body, list):
        raise SchemaError("statement body must be a list")
    for stmt in body:
        _check_stmt(stmt)


def _check_expr(node):
    if node is None or isinstance(node, (bool, int, float, str)):
        return
    if isinstance(node, list):
        raise SchemaError("bare lists are not valid nodes; use an "
                          "'array' node")
    op = _node_op(node)
    if op == "array":
        _require(node, op, "values")
        for child in node["values"]:
            _check_expr(child)
    elif op == "get":
        _require(node, op, "var")
        if not isinstance(node["var"], str):
            raise SchemaError("'get' var must be a string", node_kind=op)
    elif op == "index":
        _require(node, op, "base", "index")
        _check_expr(node["base"])
        _check_expr(node["index"])
    elif op in BINARY_OPS:
        _require(node, op, "lhs", "rhs")
        _check_expr(node["lhs"])
        _check_expr(node["rhs"])
    elif op in UNARY_OPS:
        _require(node, op, "value")
        _check_expr(node["value"])
    elif registry.random_op(op) is not None:
        _require(node, op, "args")
        args = node["args"]
        if not isinstance(args, dict):
            raise SchemaError(f"{op!r} args must be an object", node_kind=op)
        for value in args.values():
            _check_expr(value)
    elif registry.builtin(op) is not None:
        _require(node, op, "values")
        if not isinstance(node["values"], list):
            raise SchemaError(f"{op!r} values must be a list", node_kind=op)
        for child in node["values"]:
            _check_expr(child)
    else:
        raise SchemaError(f"unknown operator {op!r}", node_kind=op)


# --- validation -------------------------------------------------------------

def validate(ir: ScriptIR) -> list[Diagnostic]:
    """Static checks; an empty result means the script is clean.

    Errors: unregistered operators, bad arity, random ops without a unit,
    non-literal salts, literal choices/weights length mismatch.  Warnings:
    reads of names with no possible prior assignment that are not referenced
    by any random-op argument (and hence are not inputs the script declares
    by usage).
    """
    diagnostics: list[Diagnostic] = []
    declared_inputs = set()
    for stmt in ir.root:
        _collect_input_names(stmt, declared_inputs)
    _validate_body(ir.root, set(), declared_inputs, diagnostics)
    return diagnostics


def _collect_input_names(node, acc):
    """Names referenced inside random-op arguments or branch conditions
    declare script inputs."""
    if not isinstance(node, dict):
        return
    op = node.get("op")
    if isinstance(op, str) and registry.random_op(op) is not None:
        for arg in node.get("args", {}).values():
            _collect_var_refs(arg, acc)
    if op == "if":
        for branch in node["branches"]:
            _collect_var_refs(branch["cond"], acc)
    for value in node.values():
        if isinstance(value, dict):
            _collect_input_names(value, acc)
        elif isinstance(value, list):
            for child in value:
                _collect_input_names(child, acc)


def _collect_var_refs(node, acc):
    if not isinstance(node, dict):
        return
    if node.get("op") == "get":
        acc.add(node.get("var"))
    for value in node.values():
        if isinstance(value, dict):
            _collect_var_refs(value, acc)
        elif isinstance(value, list):
            for child in value:
                _collect_var_refs(child, acc)


def _validate_body(body, assigned, declared_inputs, diagnostics):
    """Walks statements tracking the possibly-assigned name set."""
    for stmt in body:
        op = stmt.get("op")
        if op == "set":
            _validate_expr(stmt["value"], assigned, declared_inputs,
                           diagnostics, target=stmt["var"])
            assigned.add(stmt["var"])
        elif op == "if":
            branch_sets = []
            for branch in stmt["branches"]:
                _validate_expr(branch["cond"], assigned, declared_inputs,
                               diagnostics, target=None)
                inner = set(assigned)
                _validate_body(branch["body"], inner, declared_inputs,
                               diagnostics)
                branch_sets.append(inner)
            if "else" in stmt:
                inner = set(assigned)
                _validate_body(stmt["else"], inner, declared_inputs,
                               diagnostics)
                branch_sets.append(inner)
            # "any possible assignment" counts, so union the branches.
            for s in branch_sets:
                assigned |= s
        elif op == "return":
            if "value" in stmt:
                _validate_expr(stmt["value"], assigned, declared_inputs,
                               diagnostics, target=None)


def _validate_expr(node, assigned, declared_inputs, diagnostics, target):
    if not isinstance(node, dict):
        return
    op = node.get("op")
    if op == "get":
        name = node["var"]
        if name not in assigned and name not in declared_inputs:
            diagnostics.append(Diagnostic(
                "warning", f"possibly-unbound variable {name!r}"))
        return
    if op == "array":
        for child in node["values"]:
            _validate_expr(child, assigned, declared_inputs, diagnostics,
                           target)
        return
    if op == "index":
        _validate_expr(node["base"], assigned, declared_inputs, diagnostics,
                       target)
        _validate_expr(node["index"], assigned, declared_inputs, diagnostics,
                       target)
        return
    if op in BINARY_OPS:
        _validate_expr(node["lhs"], assigned, declared_inputs, diagnostics,
                       target)
        _validate_expr(node["rhs"], assigned, declared_inputs, diagnostics,
                       target)
        return
    if op in UNARY_OPS:
        _validate_expr(node["value"], assigned, declared_inputs, diagnostics,
                       target)
        return
    spec = registry.random_op(op)
    if spec is not None:
        args = node.get("args", {})
        if "unit" not in args:
            diagnostics.append(Diagnostic(
                "error", f"random op {op!r} missing unit"))
        missing = spec.required_args - set(args) - {"unit"}
        if missing:
            diagnostics.append(Diagnostic(
                "error",
                f"{op} missing required argument(s): "
                + ", ".join(sorted(missing))))
        unknown = set(args) - spec.required_args - spec.optional_args - {"salt"}
        if unknown:
            diagnostics.append(Diagnostic(
                "error",
                f"{op} got unexpected argument(s): "
                + ", ".join(sorted(unknown))))
        if "salt" in args and not isinstance(args["salt"], str):
            diagnostics.append(Diagnostic(
                "error", f"{op} salt must be a literal string"))
        if op == "weightedChoice":
            choices, weights = args.get("choices"), args.get("weights")
            if (_is_literal_array(choices) and _is_literal_array(weights)
                    and len(choices["values"]) != len(weights["values"])):
                diagnostics.append(Diagnostic(
                    "error",
                    "weightedChoice choices and weights differ in length"))
        for value in args.values():
            _validate_expr(value, assigned, declared_inputs, diagnostics,
                           target)
        return
    spec = registry.builtin(op)
    if spec is not None:
        values = node.get("values", [])
        n = len(values)
        if n < spec.min_arity or (spec.max_arity is not None
                                  and n > spec.max_arity):
            diagnostics.append(Diagnostic(
                "error", f"{op} called with {n} argument(s)"))
        for child in values:
            _validate_expr(child, assigned, declared_inputs, diagnostics,
                           target)
        return
    diagnostics.append(Diagnostic("error", f"unknown operator {op!r}"))


def _is_literal_array(node):
    return (isinstance(node, dict) and node.get("op") == "array"
            and all(not isinstance(v, dict) for v in node["values"]))


# --- static inspection ------------------------------------------------------

def list_parameters(ir: ScriptIR) -> list[str]:
    """Assign targets in first-assignment order."""
    seen: dict[str, None] = {}
    _collect_targets(ir.root, seen)
    return list(seen)


def _collect_targets(body, seen):
    for stmt in body:
        op = stmt.get("op")
        if op == "set":
            seen.setdefault(stmt["var"], None)
        elif op == "if":
            for branch in stmt["branches"]:
                _collect_targets(branch["body"], seen)
            if "else" in stmt:
                _collect_targets(stmt["else"], seen)


DYNAMIC_UNITS = "dynamic"


def list_units(ir: ScriptIR) -> dict:
    """For each parameter assigned by a random op, the unit variable names.

    Unit expressions that are not variable refs (or literal lists of them)
    mark the entry as "dynamic".
    """
    result: dict = {}
    _collect_units(ir.root, result)
    return result


def _collect_units(body, result):
    for stmt in body:
        op = stmt.get("op")
        if op == "set":
            calls = []
            _find_random_calls(stmt["value"], calls)
            for call in calls:
                names = _unit_names(call.get("args", {}).get("unit"))
                if names is None:
                    result[stmt["var"]] = DYNAMIC_UNITS
                elif result.get(stmt["var"]) != DYNAMIC_UNITS:
                    merged = result.setdefault(stmt["var"], [])
                    for name in names:
                        if name not in merged:
                            merged.append(name)
        elif op == "if":
            for branch in stmt["branches"]:
                _collect_units(branch["body"], result)
            if "else" in stmt:
                _collect_units(stmt["else"], result)


def _find_random_calls(node, acc):
    if not isinstance(node, dict):
        return
    op = node.get("op")
    if isinstance(op, str) and registry.random_op(op) is not None:
        acc.append(node)
    for value in node.values():
        if isinstance(value, dict):
            _find_random_calls(value, acc)
        elif isinstance(value, list):
            for child in value:
                _find_random_calls(child, acc)


def _unit_names(unit_expr):
    if isinstance(unit_expr, dict) and unit_expr.get("op") == "get":
        return [unit_expr["var"]]
    if isinstance(unit_expr, dict) and unit_expr.get("op") == "array":
        names = []
        for child in unit_expr["values"]:
            if isinstance(child, dict) and child.get("op") == "get":
                names.append(child["var"])
            else:
                return None
        return names
    return None
