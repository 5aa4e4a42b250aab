class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured work budget."""


class ConditioningError(ValueError):
    """A float Vandermonde system is too large to solve reliably."""


class NotAbsorbingError(ArithmeticError):
    """The elitist chain cannot leave some transient level."""

    def __init__(self, level: int):
        super().__init__(f"chain not absorbing from level {level}")
        self.level = level


class ConvergenceError(RuntimeError):
    pass
