"""Exception hierarchy shared by all planout modules."""


class PlanoutError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PlanoutError):
    """Malformed source or serialized text.

    `offset` is the byte offset of the first failing token.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class SchemaError(PlanoutError):
    """Serialized IR text violates the node schema (unknown kind, missing field)."""

    def __init__(self, message, node_kind=None):
        super().__init__(message)
        self.node_kind = node_kind


# --- random assignment primitives ---

class EmptyUnit(PlanoutError):
    """A random op was called with no units, or a unit resolved to null."""


class EmptyChoices(PlanoutError):
    """uniformChoice called with an empty choices list."""


class LengthMismatch(PlanoutError):
    """weightedChoice choices and weights differ in length."""


class ZeroTotalWeight(PlanoutError):
    """weightedChoice weights sum to zero."""


class ProbabilityOutOfRange(PlanoutError):
    """bernoulliTrial p outside [0, 1]."""


class InvertedRange(PlanoutError):
    """randomInteger/randomFloat called with min > max."""


class DrawsExceedChoices(PlanoutError):
    """sample asked for more draws than there are choices."""


class BadUnit(PlanoutError):
    """A unit value cannot be stringified safely (wrong type, or embedded separator)."""


class BadSalt(PlanoutError):
    """A salt component contains the reserved separator character."""


# --- interpreter ---

class MissingInput(PlanoutError):
    """A referenced name is neither an input, a prior assignment, nor an override."""

    def __init__(self, name):
        super().__init__(f"missing input or unassigned variable: {name!r}")
        self.name = name


class IndexOutOfRange(PlanoutError):
    """List index outside [0, len); never silently null."""


class TypeMismatch(PlanoutError):
    """An operator was applied to values of an unsupported type."""


# --- namespaces ---

class DuplicateNamespace(PlanoutError):
    """A namespace with this name already exists in the store."""


class UnknownNamespace(PlanoutError):
    """No namespace with this name."""


class InsufficientSegments(PlanoutError):
    """Allocation request exceeds the unallocated segment pool."""


class InvalidScript(PlanoutError):
    """Script failed validation; carries the diagnostics."""

    def __init__(self, diagnostics):
        super().__init__("script failed validation: " +
                         "; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


class UnknownExperiment(PlanoutError):
    """No experiment with this name in the namespace."""


class VersionConflict(PlanoutError):
    """Optimistic-concurrency check failed: the store moved past the caller's version."""

    def __init__(self, expected, actual):
        super().__init__(f"store version is {actual}, caller read {expected}")
        self.expected = expected
        self.actual = actual


# --- logging ---

class SinkUnavailable(PlanoutError):
    """The log sink cannot be written to."""


# --- simulator ---

class ExpectedTooSmall(PlanoutError):
    """Chi-square expected cell count below the validity threshold."""


class UnknownParameter(PlanoutError):
    """Requested parameter is not present in the simulation report."""


# --- override strings ---

class MalformedOverride(PlanoutError):
    """An override string could not be parsed (missing colon, empty key)."""
