"""Exception hierarchy.

Precondition failures derive from :class:`PreconditionError`; the CLI maps
them to exit code 2. Parse failures map to 1, witness failures to 3.
"""

from __future__ import annotations


class PtrankError(Exception):
    """Base class for all library errors."""


class PreconditionError(PtrankError, ValueError):
    """An operation was called outside its documented domain."""


class ShapeMismatchError(PreconditionError):
    pass


class ZeroMatrixError(PreconditionError):
    pass


class NotInvertibleError(PreconditionError):
    pass


class DependentFamiliesError(PreconditionError):
    pass


class WrongShapeError(PreconditionError):
    pass


class WrongSchmidtRankError(PreconditionError):
    pass


class ShapeTooSmallError(PreconditionError):
    pass


class NoFullRankInSpanError(PreconditionError):
    pass


class NotDiagonalError(PreconditionError):
    pass


class InfeasibleParametersError(PreconditionError):
    pass


class BudgetExceededError(PreconditionError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"search space has {size} instances, budget is {budget}")
        self.size = size
        self.budget = budget


class UnknownSuiteError(PreconditionError):
    pass


class ParseError(PtrankError, ValueError):
    """Malformed matrix document or rational literal."""


class WitnessError(PtrankError):
    """A produced witness failed re-verification (internal error)."""
