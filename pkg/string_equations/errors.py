"""Exceptions raised by the string equation library.

None of these derive from ValueError, so pydantic validators let them through unchanged.
"""


class StringEquationError(Exception):
    """Root of every error raised by this package."""


class MalformedSystem(StringEquationError):
    """A system, equation or pattern violates a structural invariant."""


class EmptyTarget(MalformedSystem):
    """Target strings must be non-empty."""


class EmptyPattern(MalformedSystem):
    """Patterns must contain at least one block."""


class DuplicateJoker(MalformedSystem):
    """A joker id occurs more than once in a system."""


class ParseError(StringEquationError):
    """Instance, assignment or graph text could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)


class MissingBlock(StringEquationError):
    """An assignment has no entry for a block used in a pattern."""


class BudgetExceeded(StringEquationError):
    """The branch cap was hit before the search finished."""

    def __init__(self, branches: int, cap: int):
        self.branches = branches
        self.cap = cap
        super().__init__(f"branch cap exceeded: {branches} branches explored (cap {cap})")


class NotBorderOnly(StringEquationError):
    """The border solver was given a system with a repeated non-border block."""


class UnsupportedVariant(StringEquationError):
    """A solver was asked for semantics or a deletion budget it does not handle."""


class InternalInconsistency(StringEquationError):
    """An extracted witness failed verification. Always a bug."""


class ReductionError(StringEquationError):
    """Raised by the instance generators and the decoder."""


class BadKappa(ReductionError):
    pass


class NotColored(ReductionError):
    pass


class DecodeFailure(ReductionError):
    pass


class MinLcsOne(ReductionError):
    """Non-erasing semantics cannot express a common subsequence of length zero."""


class LabelClash(ReductionError):
    """A vertex label collides with a separator symbol of a construction."""
