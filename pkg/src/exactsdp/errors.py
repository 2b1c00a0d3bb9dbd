"""Exception types raised by exactsdp.

Every solver failure mode has its own class so callers (and the CLI exit
codes) can tell a budget overrun from a genuine mathematical obstruction.
"""


class ExactSDPError(Exception):
    """Base class for all library errors."""


class SizeError(ExactSDPError, ValueError):
    """A size or index argument is out of range."""


class DimensionError(ExactSDPError):
    """An ideal expected to be zero-dimensional is not.

    ``source`` optionally names the (p, iota) stratum that produced it.
    """

    def __init__(self, message, source=None):
        super().__init__(message)
        self.source = source


class ResourceError(ExactSDPError):
    """The Groebner reduction step budget was exhausted."""


class RandomnessBudgetError(ExactSDPError):
    """No separating linear form was found within the retry budget."""


class RegularityError(ExactSDPError):
    """An incidence variety failed the regularity check."""

    def __init__(self, message, p=None, iota=None):
        super().__init__(message)
        self.p = p
        self.iota = iota


class DegenerateCostError(ExactSDPError, ValueError):
    """The cost vector is zero where a nonzero one is required."""


class DegenerateSupportError(ExactSDPError, ValueError):
    """Incidence systems are undefined for p = m."""


class FieldError(ExactSDPError, ValueError):
    """Point coordinates do not live over a common algebraic field."""


class PreconditionError(ExactSDPError, ValueError):
    """An input violates a documented precondition."""
