"""Exception types shared across the package."""


class LinefairError(Exception):
    """Base class for all errors raised by linefair."""


class ArgumentError(LinefairError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(ArgumentError):
    """A document could not be parsed into an instance or allocation."""


class NormalizationError(ArgumentError):
    """An agent has zero total utility, so its row cannot be rescaled."""


class CapacityError(LinefairError, RuntimeError):
    """An exhaustive search would exceed the configured budget."""

    def __init__(self, message, required=None, limit=None):
        super().__init__(message)
        self.required = required
        self.limit = limit
