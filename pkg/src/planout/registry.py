"""Operator registry: the set of call operators an IR tree may use.

Two kinds of call operators exist:

- random operators take keyword arguments, always including `unit`, and
  route through the salted hashing primitives;
- builtin functions take positional arguments (e.g. min(length(xs), 3)).

Custom operators can be plugged in with `register_random_op` /
`register_builtin`; the structural node kinds (set, if, index, arithmetic,
...) are fixed and live in the IR schema itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import random_ops
from .errors import TypeMismatch


@dataclass(frozen=True)
class RandomOpSpec:
    name: str
    required_args: frozenset
    optional_args: frozenset
    # impl(args: dict of evaluated values, ctx, units) -> value
    impl: Callable = field(compare=False)


@dataclass(frozen=True)
class BuiltinSpec:
    name: str
    min_arity: int
    max_arity: int | None  # None = variadic
    impl: Callable = field(compare=False)  # impl(*values) -> value


_RANDOM_OPS: dict[str, RandomOpSpec] = {}
_BUILTINS: dict[str, BuiltinSpec] = {}


def register_random_op(name, required_args, impl, optional_args=()):
    spec = RandomOpSpec(name, frozenset(required_args),
                        frozenset(optional_args), impl)
    _RANDOM_OPS[name] = spec
    return spec


def register_builtin(name, min_arity, max_arity, impl):
    spec = BuiltinSpec(name, min_arity, max_arity, impl)
    _BUILTINS[name] = spec
    return spec


def random_op(name) -> RandomOpSpec | None:
    return _RANDOM_OPS.get(name)


def builtin(name) -> BuiltinSpec | None:
    return _BUILTINS.get(name)


def random_op_names():
    return set(_RANDOM_OPS)


def builtin_names():
    return set(_BUILTINS)


def is_call_op(name) -> bool:
    return name in _RANDOM_OPS or name in _BUILTINS


# --- built-in random operators ---

register_random_op(
    "uniformChoice", ["choices", "unit"],
    lambda args, ctx, units: random_ops.uniform_choice(
        args["choices"], ctx, units))

register_random_op(
    "weightedChoice", ["choices", "weights", "unit"],
    lambda args, ctx, units: random_ops.weighted_choice(
        args["choices"], args["weights"], ctx, units))

register_random_op(
    "bernoulliTrial", ["p", "unit"],
    lambda args, ctx, units: random_ops.bernoulli_trial(
        args["p"], ctx, units))

register_random_op(
    "randomInteger", ["min", "max", "unit"],
    lambda args, ctx, units: random_ops.random_integer(
        args["min"], args["max"], ctx, units))

register_random_op(
    "randomFloat", ["min", "max", "unit"],
    lambda args, ctx, units: random_ops.random_float(
        args["min"], args["max"], ctx, units))

register_random_op(
    "sample", ["choices", "draws", "unit"],
    lambda args, ctx, units: random_ops.sample(
        args["choices"], args["draws"], ctx, units))


# --- built-in functions ---

def _length(value):
    if isinstance(value, (list, str, dict)):
        return len(value)
    raise TypeMismatch(f"length() of {type(value).__name__}")


def _numbers(values):
    # A single list argument means "over the list".
    if len(values) == 1 and isinstance(values[0], list):
        values = values[0]
    if not values:
        raise TypeMismatch("min/max of nothing")
    for v in values:
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            if not isinstance(v, bool):
                raise TypeMismatch(
                    f"min/max over non-number {type(v).__name__}")
    return values


def _round(value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeMismatch(f"round() of {type(value).__name__}")
    return round(value)


def _coalesce(*values):
    for v in values:
        if v is not None:
            return v
    return None


register_builtin("length", 1, 1, _length)
register_builtin("min", 1, None, lambda *vs: min(_numbers(list(vs))))
register_builtin("max", 1, None, lambda *vs: max(_numbers(list(vs))))
register_builtin("round", 1, 1, _round)
register_builtin("coalesce", 1, None, _coalesce)
