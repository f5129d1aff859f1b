"""Error taxonomy shared by every module.

Three failure classes matter to callers and map onto distinct CLI exit codes:
malformed input, well-formed input that violates a mathematical hypothesis,
and internal cross-check disagreement (a bug in this package, never the data).
"""


class InputError(ValueError):
    """Malformed or inconsistent input: bad syntax, chart mismatch, shape errors."""


class ParseError(InputError):
    """Syntax error in the polynomial grammar, with a character position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PreconditionError(ValueError):
    """Well-formed data that fails a mathematical hypothesis of the operation.

    Example: asking for the Poisson hierarchy of a pair that is not
    Poisson-Nijenhuis. The offending residuals ride along when available.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class InternalError(AssertionError):
    """Two independent certificates disagreed. Always a bug, never bad data."""
