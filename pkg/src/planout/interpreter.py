"""Sequential evaluator for ScriptIR.

Evaluation is eager and total per request: statements run in script order
against an environment seeded with the caller's inputs, with overridden
names frozen throughout.  Random operators route through the salted hashing
primitives using the enclosing assignment's target name as the default
parameter salt.
"""

from __future__ import annotations

import json
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable

from . import registry
from .errors import (
    IndexOutOfRange,
    MissingInput,
    TypeMismatch,
)
from .ir import BINARY_OPS, ScriptIR, list_parameters, script_digest
from .random_ops import SaltContext


def truthy(value) -> bool:
    """false, 0, 0.0, "", empty list, and null are false; all else true."""
    if value is None:
        return False
    if isinstance(value, (bool, int, float, str, list, dict)):
        return bool(value)
    return True


def _as_index(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    raise TypeMismatch(f"index must be an integer, got {value!r}")


def _check_number(value, op):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, float)):
        return value
    raise TypeMismatch(f"{op} applied to {type(value).__name__}")


class _StopScript(Exception):
    pass


@dataclass
class Assignment:
    """Result of one evaluation: parameters in script assignment order.

    The parameter map is immutable after evaluation; the exposure flag is a
    once-flag guarded by a lock, and the exposure hook fires at most once
    per Assignment object, on the first get() of a set parameter.
    """

    params: "OrderedDict[str, object]"
    inputs: dict
    overrides: dict
    ctx: SaltContext
    digest: str
    _on_exposure: Callable | None = None
    _exposed: bool = False
    _lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def exposed(self) -> bool:
        return self._exposed

    def get(self, name, default=None):
        """Value of a set parameter (logging exposure once), else `default`."""
        if name in self.params:
            self._mark_exposure()
            return self.params[name]
        return default

    def get_all(self) -> dict:
        """All set parameters; counts as a materializing access."""
        if self.params:
            self._mark_exposure()
        return dict(self.params)

    def peek(self, name, default=None):
        """Like get() but never logs exposure (inspection only)."""
        return self.params.get(name, default)

    def _mark_exposure(self):
        with self._lock:
            if self._exposed:
                return
            self._exposed = True
            hook = self._on_exposure
        if hook is not None:
            hook(self)

    def canonical(self) -> str:
        """Byte-stable text form of the parameter map, in script order."""
        return json.dumps(list(self.params.items()),
                          separators=(",", ":"), sort_keys=False)


def evaluate(ir: ScriptIR, inputs=None, overrides=None,
             ctx: SaltContext | None = None,
             on_exposure: Callable | None = None) -> Assignment:
    inputs = dict(inputs or {})
    overrides = dict(overrides or {})
    if ctx is None:
        ctx = SaltContext("default", "default")
    evaluator = _Evaluator(ir, inputs, overrides, ctx)
    params = evaluator.run()
    return Assignment(params=params, inputs=inputs, overrides=overrides,
                      ctx=ctx, digest=script_digest(ir),
                      _on_exposure=on_exposure)


class _Evaluator:
    def __init__(self, ir, inputs, overrides, ctx):
        self.ir = ir
        self.overrides = overrides
        self.ctx = ctx
        self.env = dict(inputs)
        self.env.update(overrides)
        self.params: OrderedDict = OrderedDict()
        self.target: str | None = None

    def run(self) -> OrderedDict:
        try:
            self.exec_body(self.ir.root)
        except _StopScript:
            pass
        # Frozen script parameters dominate even when their assignment was
        # never reached (e.g. inside an untaken branch).
        for name in self.overrides:
            if name not in self.params and name in list_parameters(self.ir):
                self.params[name] = self.overrides[name]
        return self.params

    def exec_body(self, body):
        for stmt in body:
            self.exec_stmt(stmt)

    def exec_stmt(self, stmt):
        op = stmt["op"]
        if op == "set":
            name = stmt["var"]
            if name in self.overrides:
                # Assigning to a frozen name is a no-op; the RHS is not
                # evaluated at all.
                self.params.setdefault(name, self.overrides[name])
                return
            self.target = name
            try:
                value = self.eval_expr(stmt["value"])
            finally:
                self.target = None
            self.env[name] = value
            self.params[name] = value
        elif op == "if":
            for branch in stmt["branches"]:
                if truthy(self.eval_expr(branch["cond"])):
                    self.exec_body(branch["body"])
                    return
            if "else" in stmt:
                self.exec_body(stmt["else"])
        elif op == "return":
            if "value" in stmt:
                self.eval_expr(stmt["value"])
            raise _StopScript()

    def eval_expr(self, node):
        if not isinstance(node, dict):
            return node
        op = node["op"]
        if op == "get":
            name = node["var"]
            if name in self.env:
                return self.env[name]
            raise MissingInput(name)
        if op == "array":
            return [self.eval_expr(v) for v in node["values"]]
        if op == "index":
            return self.eval_index(node)
        if op in BINARY_OPS:
            return self.eval_binary(op, node)
        if op == "not":
            return not truthy(self.eval_expr(node["value"]))
        if op == "neg":
            return -_check_number(self.eval_expr(node["value"]), "negation")
        spec = registry.random_op(op)
        if spec is not None:
            return self.eval_random(op, spec, node)
        spec = registry.builtin(op)
        if spec is not None:
            values = [self.eval_expr(v) for v in node["values"]]
            return spec.impl(*values)
        raise TypeMismatch(f"unknown operator {op!r}")

    def eval_index(self, node):
        base = self.eval_expr(node["base"])
        index = self.eval_expr(node["index"])
        if isinstance(base, list):
            i = _as_index(index)
            if not 0 <= i < len(base):
                raise IndexOutOfRange(
                    f"index {i} out of range for list of length {len(base)}")
            return base[i]
        if isinstance(base, dict):
            if not isinstance(index, str):
                raise TypeMismatch("map keys are strings")
            if index not in base:
                raise IndexOutOfRange(f"missing map key {index!r}")
            return base[index]
        raise TypeMismatch(f"cannot index into {type(base).__name__}")

    def eval_binary(self, op, node):
        if op == "and":
            return (truthy(self.eval_expr(node["lhs"]))
                    and truthy(self.eval_expr(node["rhs"])))
        if op == "or":
            return (truthy(self.eval_expr(node["lhs"]))
                    or truthy(self.eval_expr(node["rhs"])))
        lhs = self.eval_expr(node["lhs"])
        rhs = self.eval_expr(node["rhs"])
        if op == "eq":
            return lhs == rhs
        if op == "ne":
            return lhs != rhs
        if op in ("lt", "le", "gt", "ge"):
            return self.compare(op, lhs, rhs)
        # arithmetic
        a = _check_number(lhs, op)
        b = _check_number(rhs, op)
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "div":
            if b == 0:
                raise TypeMismatch("division by zero")
            return a / b
        if op == "mod":
            if not isinstance(a, int) or not isinstance(b, int):
                raise TypeMismatch("% requires integer operands")
            if b == 0:
                raise TypeMismatch("modulo by zero")
            return a % b
        raise TypeMismatch(f"unknown binary op {op!r}")

    @staticmethod
    def compare(op, lhs, rhs):
        both_str = isinstance(lhs, str) and isinstance(rhs, str)
        both_num = (isinstance(lhs, (bool, int, float))
                    and isinstance(rhs, (bool, int, float)))
        if not (both_str or both_num):
            raise TypeMismatch(
                f"cannot order {type(lhs).__name__} and {type(rhs).__name__}")
        if op == "lt":
            return lhs < rhs
        if op == "le":
            return lhs <= rhs
        if op == "gt":
            return lhs > rhs
        return lhs >= rhs

    def eval_random(self, op, spec, node):
        args = {}
        for key, expr in node["args"].items():
            if key == "salt":
                args[key] = expr  # literal by validation
            else:
                args[key] = self.eval_expr(expr)
        unit_value = args.pop("unit")
        units = unit_value if isinstance(unit_value, list) else [unit_value]
        salt = args.pop("salt", None)
        if salt is None:
            salt = self.target if self.target is not None else op
        ctx = self.ctx.with_parameter_salt(salt)
        return spec.impl(args, ctx, units)


class AssignmentCache:
    """Bounded LRU of Assignments keyed by the full evaluation identity.

    Thread-safe; get_or_evaluate is an atomic get-or-insert with respect to
    the cache map (a losing racer's freshly evaluated Assignment is simply
    discarded, which is harmless since evaluation is deterministic).
    """

    def __init__(self, maxsize=10000):
        self.maxsize = maxsize
        self._entries: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    @staticmethod
    def _key(ir, inputs, overrides, ctx):
        return json.dumps(
            [ctx.namespace, ctx.experiment, script_digest(ir),
             inputs or {}, overrides or {}],
            sort_keys=True, separators=(",", ":"))

    def get_or_evaluate(self, ir, inputs=None, overrides=None, ctx=None,
                        on_exposure=None) -> Assignment:
        if ctx is None:
            ctx = SaltContext("default", "default")
        key = self._key(ir, inputs, overrides, ctx)
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                return self._entries[key]
        assignment = evaluate(ir, inputs, overrides, ctx,
                              on_exposure=on_exposure)
        with self._lock:
            existing = self._entries.get(key)
            if existing is not None:
                self._entries.move_to_end(key)
                return existing
            self._entries[key] = assignment
            while len(self._entries) > self.maxsize:
                self._entries.popitem(last=False)
        return assignment

    def __len__(self):
        return len(self._entries)
