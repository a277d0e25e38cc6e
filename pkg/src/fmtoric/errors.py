class FmToricError(Exception):
    """Base class for errors raised by fmtoric."""


class PreconditionError(FmToricError, ValueError):
    """An input violates the documented precondition of an operation."""


class NotSimplicialError(PreconditionError):
    pass


class BudgetExceeded(FmToricError):
    """A construction would produce more cones than the configured budget."""

    def __init__(self, predicted: int, budget: int):
        super().__init__(f"predicted {predicted} cones exceeds budget {budget}")
        self.predicted = predicted
        self.budget = budget


class ConsistencyError(FmToricError, RuntimeError):
    """An internal cross-check failed; indicates a construction bug."""
