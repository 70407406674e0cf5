"""Deterministic, salt-scoped random assignment primitives.

Every operator here is a pure function of (salt context, unit tuple, arguments).
Randomness comes from SHA1 over a salt string of the form

    namespace.experiment.parameter_salt.unit[.unit...][.suffix]

The first 15 hex digits of the digest are read as a base-16 integer in
[0, 16**15), and dividing by 16**15 - 1 yields a float in [0.0, 1.0].
This exact construction is the cross-platform compatibility contract; see
docs/hashing.md.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

from .errors import (
    BadSalt,
    BadUnit,
    DrawsExceedChoices,
    EmptyChoices,
    EmptyUnit,
    InvertedRange,
    LengthMismatch,
    ProbabilityOutOfRange,
    ZeroTotalWeight,
)

# 15 hex digits = 60 bits; fits exactly in a 64-bit float's integer range.
HASH_DIGITS = 15
HASH_SPACE = 16 ** HASH_DIGITS
_DENOMINATOR = float(HASH_SPACE - 1)

SEPARATOR = "."


def check_salt_component(component: str) -> str:
    if SEPARATOR in component:
        raise BadSalt(f"salt component contains {SEPARATOR!r}: {component!r}")
    return component


@dataclass(frozen=True)
class SaltContext:
    """Scopes randomness to (namespace, experiment, parameter).

    `parameter_salt` defaults to the assigned parameter's name; an explicit
    salt= argument on the operator call overrides it.
    """

    namespace: str
    experiment: str
    parameter_salt: str = ""

    def __post_init__(self):
        check_salt_component(self.namespace)
        check_salt_component(self.experiment)
        check_salt_component(self.parameter_salt)

    def with_parameter_salt(self, salt: str) -> "SaltContext":
        return replace(self, parameter_salt=salt)

    def full_salt(self) -> str:
        return SEPARATOR.join(
            (self.namespace, self.experiment, self.parameter_salt))


@dataclass(frozen=True)
class HashDraw:
    """One deterministic draw: a 60-bit integer and its unit-interval float."""

    integer: int

    @property
    def fraction(self) -> float:
        return self.integer / _DENOMINATOR


def unit_string(value) -> str:
    """Canonical string form of a unit value.

    Integers and their string forms collide on purpose (4 and "4" hash the
    same); booleans canonicalize as 1/0; integral floats canonicalize to the
    matching integer, other floats use shortest-round-trip repr.  String
    units must not contain the separator, which would create salt collisions
    between different unit tuples.
    """
    if value is None:
        raise EmptyUnit("unit value is null; missing input data?")
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value.is_integer():
            return str(int(value))
        return repr(value)
    if isinstance(value, str):
        if SEPARATOR in value:
            raise BadUnit(f"string unit contains {SEPARATOR!r}: {value!r}")
        return value
    raise BadUnit(f"unit of type {type(value).__name__} is not stringifiable")


def hash_draw(ctx: SaltContext, units, extra_salt_suffix: str | None = None) -> HashDraw:
    """SHA1-based draw for a unit tuple under a salt context."""
    if not units:
        raise EmptyUnit("random op called with an empty unit tuple")
    parts = [ctx.full_salt()]
    parts.extend(unit_string(u) for u in units)
    if extra_salt_suffix is not None:
        parts.append(extra_salt_suffix)
    digest = hashlib.sha1(SEPARATOR.join(parts).encode("utf-8")).hexdigest()
    return HashDraw(int(digest[:HASH_DIGITS], 16))


def uniform_choice(choices, ctx: SaltContext, units):
    if not choices:
        raise EmptyChoices("uniformChoice requires a nonempty choices list")
    draw = hash_draw(ctx, units)
    return choices[draw.integer % len(choices)]


def weighted_choice(choices, weights, ctx: SaltContext, units):
    if len(choices) != len(weights):
        raise LengthMismatch(
            f"{len(choices)} choices vs {len(weights)} weights")
    total = float(sum(weights))
    if total <= 0.0:
        raise ZeroTotalWeight("weights sum to zero")
    target = hash_draw(ctx, units).fraction * total
    cumulative = 0.0
    for choice, weight in zip(choices, weights):
        cumulative += weight
        if cumulative >= target:
            return choice
    return choices[-1]  # guards float summation shortfall


def bernoulli_trial(p, ctx: SaltContext, units) -> int:
    if not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRange(f"p={p} outside [0, 1]")
    if p >= 1.0:
        # Avoids the single digest value whose fraction equals 1.0 exactly.
        return 1
    return 1 if hash_draw(ctx, units).fraction < p else 0


def random_integer(min_value: int, max_value: int, ctx: SaltContext, units) -> int:
    if min_value > max_value:
        raise InvertedRange(f"min={min_value} > max={max_value}")
    span = max_value - min_value + 1
    return min_value + hash_draw(ctx, units).integer % span


def random_float(min_value: float, max_value: float, ctx: SaltContext, units) -> float:
    if min_value > max_value:
        raise InvertedRange(f"min={min_value} > max={max_value}")
    return min_value + hash_draw(ctx, units).fraction * (max_value - min_value)


def sample(choices, draws: int, ctx: SaltContext, units):
    """Without-replacement sample: deterministic Fisher-Yates prefix.

    The swap index at position i is an independent draw with salt suffix
    str(i), taken for i from len-1 down to 1; the first `draws` elements of
    the shuffled copy are returned.
    """
    if not 0 <= draws <= len(choices):
        raise DrawsExceedChoices(
            f"draws={draws} outside [0, {len(choices)}]")
    shuffled = list(choices)
    for i in range(len(shuffled) - 1, 0, -1):
        j = hash_draw(ctx, units, extra_salt_suffix=str(i)).integer % (i + 1)
        shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
    return shuffled[:draws]
