"""Exception types raised across frameq."""


class FrameqError(Exception):
    """Base class for all frameq errors."""


class InvalidInput(FrameqError, ValueError):
    pass


class SizeMismatch(FrameqError, ValueError):
    pass


class DimensionMismatch(FrameqError, ValueError):
    pass


class NotPSD(FrameqError, ValueError):
    pass


class ZeroVector(FrameqError, ValueError):
    pass


class NotInSpan(FrameqError, ValueError):
    pass


class DivisionByZero(FrameqError, ZeroDivisionError):
    pass


class MissingCycleProduct(FrameqError, KeyError):
    """A fundamental cycle has no product in the supplied data."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"missing product for cycle {list(self.cycle)}")

    def __str__(self):
        return self.args[0]


class InconsistentModulus(FrameqError, ValueError):
    pass


class NotRealEquiangular(FrameqError, ValueError):
    pass


class SearchBudgetExceeded(FrameqError, RuntimeError):
    """The reindexing search ran out of nodes; the answer is unknown."""

    def __init__(self, budget, nodes=None):
        self.budget = budget
        self.nodes = nodes
        super().__init__(f"search budget of {budget} nodes exhausted")


class NotPSDWarning(UserWarning):
    """Reconstructed data is not realizable as a Gram matrix."""
