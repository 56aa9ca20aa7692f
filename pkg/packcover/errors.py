"""Exceptions raised by packcover."""

from typing import Any, Optional


class InvalidParameter(ValueError):
    """An argument violates the precondition of an operation."""


class NotAMatroidError(ValueError):
    """A set system fails one of the matroid axioms."""

    def __init__(self, message: str, violation: Optional[tuple] = None):
        super().__init__(message)
        self.violation = violation


class BasepointDegenerateError(ValueError):
    """The basepoint of a 2-sum is a loop or a coloop on one side."""


class ParseError(ValueError):
    """Malformed or semantically invalid input text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column


class StrategyInvalidError(ValueError):
    """A strategy prescribed an illegal move."""

    def __init__(self, message: str, state: Any = None):
        super().__init__(message)
        self.state = state


class TheoremViolation(RuntimeError):
    """A finite lemma failed on a concrete instance.

    The instance is kept so that a report can serialize and replay it.
    """

    def __init__(self, message: str, instance: Any = None):
        super().__init__(message)
        self.instance = instance


class InternalError(RuntimeError):
    """A search whose success is guaranteed came back empty."""
