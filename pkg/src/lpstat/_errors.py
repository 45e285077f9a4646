"""Exception types raised across the package."""


class LPError(ValueError):
    """Base class for data-level errors (bad input, degenerate samples)."""


class DegenerateError(LPError):
    """A sample or marginal has no spread where spread is required."""


class DomainError(LPError):
    """An argument lies outside the domain of the function."""


class SupportMismatchError(LPError):
    """A parametric start puts zero probability where data lives."""


class NumericalError(RuntimeError):
    """An iterative solver failed.

    Attributes
    ----------
    residual : float
        Last residual (or gradient norm) reached before giving up.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConvergenceError(NumericalError):
    pass


class InfeasibleMomentsError(NumericalError):
    pass


class SeparationError(NumericalError):
    pass
