"""Exceptions raised by the Good distribution library."""

from typing import Any

import numpy as np


class GoodError(Exception):
    """Base exception for libgood errors."""

    exit_code: int = 1
    reason: str = "error"


class DomainError(GoodError, ValueError):
    """Argument outside the domain of the operation."""

    reason = "domain"


class InfeasibleParameterError(DomainError):
    """Linked parameter z falls outside (0, 1)."""

    reason = "infeasible_z"


class PreconditionError(DomainError):
    """Operation called on an object that does not satisfy its precondition."""

    reason = "precondition"


class DimensionError(DomainError):
    """Vector or matrix dimensions do not agree."""

    reason = "dimension"


class InfeasibleStartError(DomainError):
    """Optimizer start point has a non-finite objective."""

    reason = "infeasible_start"


class NumericalError(GoodError):
    """Base for numerical failures (non-convergence, singular matrices)."""

    exit_code = 3
    reason = "numerical"


class ConvergenceError(NumericalError):
    """Iterative procedure stopped without satisfying its convergence rule."""

    reason = "non_convergence"

    def __init__(
        self,
        message: str,
        point: Any = None,
        value: float | None = None,
        iterations: int = 0,
    ):
        self.point = None if point is None else np.asarray(point, dtype=float)
        self.value = value
        self.iterations = iterations
        super().__init__(message)


class CapExceededError(ConvergenceError):
    """Series or accumulation hit its hard iteration cap."""

    reason = "cap_exceeded"


class EvaluationError(NumericalError):
    """Objective returned a non-finite value at a differentiation point."""

    reason = "evaluation"


class SingularHessianError(NumericalError):
    """Negative Hessian could not be inverted into a covariance matrix."""

    reason = "singular_hessian"

    def __init__(self, message: str, condition_number: float = float("inf")):
        self.condition_number = condition_number
        super().__init__(f"{message} (condition number {condition_number:.3g})")


class NestingError(NumericalError):
    """Likelihood-ratio test models are not nested as required."""

    reason = "nesting"


class DataError(GoodError):
    """Input data could not be loaded or failed validation."""

    exit_code = 2
    reason = "data"

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class UnknownDatasetError(DataError):
    """Requested dataset is not in the registry."""

    reason = "unknown_dataset"

    def __init__(self, name: str, available: list[str]):
        self.name = name
        self.available = available
        super().__init__(f"Unknown dataset '{name}' (available: {', '.join(available)})")
