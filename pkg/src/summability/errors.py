"""Exception hierarchy shared by every module."""


class SummabilityError(Exception):
    """Base class for all errors raised by the toolkit."""


class ModeError(SummabilityError):
    """Exact and floating values were mixed, or an exact result is irrational."""


class ParseError(SummabilityError):
    """Malformed DSL string or data file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OutOfRangeError(SummabilityError, IndexError):
    """Index beyond the end of a file-backed sequence."""


class PreconditionError(SummabilityError):
    """An operation was called outside its domain."""


class BudgetError(PreconditionError):
    """The coefficient constructor ran out of indices before a block closed."""

    def __init__(self, message, blocks=(), reached=None, prefix_sum=None):
        super().__init__(message)
        self.blocks = list(blocks)
        self.reached = reached
        self.prefix_sum = prefix_sum


class UnsupportedError(PreconditionError):
    """The requested computation is refused (for example exponential brute force)."""
