"""Exception hierarchy shared across the package."""


class BellsimError(Exception):
    """Base class for all package errors."""


class ValidationError(BellsimError, ValueError):
    """An input violates a type or domain contract."""


class ContextMismatchError(BellsimError):
    """A statistic was requested outside its measurement context.

    Conditional quantities are defined per measurement setup, each with
    its own hidden-variable set; mixing sets anchored to different axes
    is rejected instead of silently combined.
    """


class ConditioningUndefinedError(BellsimError):
    """Conditioning on an event of probability 0 or 1 was requested."""


class EmptyReportError(BellsimError):
    """No jointly registered trials, so frequencies are undefined."""
