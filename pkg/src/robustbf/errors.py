"""Exception types raised by the solvers."""

import numpy as np


class BeamformingError(Exception):
    """Base class for solver failures."""


class SingularCovarianceError(BeamformingError, np.linalg.LinAlgError):
    """A covariance that must be positive definite is numerically singular.

    Attributes:
        condition: Estimated 2-norm condition number of the offending matrix
            (``inf`` when an eigenvalue is non-positive).
    """

    def __init__(self, message, condition):
        super().__init__(f"{message} (condition number ~ {condition:.3g})")
        self.condition = condition


class InfeasibleConstraintError(BeamformingError):
    """The quadratic constraint ``w^H Q w >= 1`` admits no solution."""

    def __init__(self, lambda_max):
        super().__init__(
            f"constraint set is empty: largest pencil eigenvalue is {lambda_max:.3g} <= 0"
        )
        self.lambda_max = lambda_max


class ConvergenceError(BeamformingError):
    """A scalar root search did not converge within its iteration cap."""
