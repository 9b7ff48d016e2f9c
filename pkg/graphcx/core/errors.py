"""
Exception hierarchy. Every error carries a human-readable ``message``; the
CLI maps the class to an exit code.
"""

from typing import Any


class GraphComplexError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class MalformedGraphError(GraphComplexError):
    """Structural invariant of a graph or input file violated."""


class FamilyError(GraphComplexError):
    """Operation requested on a family that does not support it."""


class BudgetExceededError(GraphComplexError):
    """Generation or memory budget exceeded."""


class GenerationError(GraphComplexError):
    """A computed term fell outside the generated slice it should belong to."""


class RibbonError(GraphComplexError):
    pass


class VerificationError(GraphComplexError):
    """An identity that must hold exactly failed (d^2 != 0, chain map broken, ...)."""

    def __init__(self, message: str, counterexample: Any = None):
        super().__init__(message)
        self.counterexample = counterexample
