"""Derivative-free maximization and numeric differentiation.

Infeasible regions are encoded by the objective returning -inf; Nelder-Mead
only ranks vertices, so such points are simply worse than any finite value.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, Field
from scipy.optimize import minimize

from libgood.exceptions import EvaluationError, InfeasibleStartError

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


class OptimizerConfig(BaseModel):
    """Settings for maximize and the numeric derivatives."""

    tolerance: float = Field(default=1e-10, gt=0.0)  # Value spread across the simplex
    x_tolerance: float = Field(default=1e-8, gt=0.0)  # Simplex diameter
    max_iterations: int = Field(default=50_000, ge=1)
    restarts: int = Field(default=1, ge=0)  # Always performed
    max_restarts: int = Field(default=5, ge=0)  # While a restart still improves
    gradient_step: float = Field(default=1e-5, gt=0.0)
    hessian_step: float = Field(default=1e-4, gt=0.0)


@dataclass
class OptimResult:
    """Outcome of a maximization."""

    point: np.ndarray
    value: float
    converged: bool
    iterations: int


def maximize(
    objective: Objective,
    start: ArrayLike,
    config: OptimizerConfig | None = None,
) -> OptimResult:
    """Maximize objective with Nelder-Mead, restarting from the found point.

    Args:
        objective: Function of a real vector returning a real or -inf
        start: Starting vector; objective(start) must be finite
        config: Tolerances and iteration limits

    Returns:
        OptimResult; converged is False when the iteration budget ran out

    Raises:
        InfeasibleStartError: If objective(start) is not finite
    """
    config = config or OptimizerConfig()
    point = np.atleast_1d(np.asarray(start, dtype=float)).copy()

    start_value = objective(point)
    if not np.isfinite(start_value):
        raise InfeasibleStartError(f"Objective is not finite at start {point.tolist()}")

    def negated(x: np.ndarray) -> float:
        value = objective(x)
        return -float(value) if np.isfinite(value) else np.inf

    options = {
        "xatol": config.x_tolerance,
        "fatol": config.tolerance,
        "maxiter": config.max_iterations,
    }

    value = float(start_value)
    iterations = 0
    converged = False
    runs = 0

    while True:
        result = minimize(negated, point, method="Nelder-Mead", options=options)
        iterations += int(result.nit)
        runs += 1
        improvement = -float(result.fun) - value
        if np.isfinite(result.fun) and improvement >= 0.0:
            point = np.asarray(result.x, dtype=float)
            value = -float(result.fun)
        converged = result.status == 0
        logger.debug(
            "Nelder-Mead run %d: value=%.12g iterations=%d status=%d",
            runs, value, result.nit, result.status,
        )

        if not converged:
            break
        if runs > config.restarts and (
            improvement <= config.tolerance or runs > config.restarts + config.max_restarts
        ):
            break

    return OptimResult(point=point, value=value, converged=converged, iterations=iterations)


def _steps(point: np.ndarray, step: float) -> np.ndarray:
    return step * np.maximum(1.0, np.abs(point))


def _finite_at(f: Objective, x: np.ndarray) -> float:
    value = f(x)
    if not np.isfinite(value):
        raise EvaluationError(f"Non-finite value at differentiation point {x.tolist()}")
    return float(value)


def numeric_gradient(f: Objective, point: ArrayLike, step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient with step h_i = step * max(1, |p_i|).

    Raises:
        EvaluationError: If any evaluation is non-finite
    """
    p = np.atleast_1d(np.asarray(point, dtype=float))
    h = _steps(p, step)
    grad = np.empty_like(p)
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h[i]
        grad[i] = (_finite_at(f, p + e) - _finite_at(f, p - e)) / (2.0 * h[i])
    return grad


def numeric_hessian(f: Objective, point: ArrayLike, step: float = 1e-4) -> np.ndarray:
    """Symmetric central second-difference Hessian.

    Raises:
        EvaluationError: If any evaluation is non-finite
    """
    p = np.atleast_1d(np.asarray(point, dtype=float))
    h = _steps(p, step)
    dim = p.size
    center = _finite_at(f, p)
    hess = np.empty((dim, dim))

    for i in range(dim):
        ei = np.zeros(dim)
        ei[i] = h[i]
        hess[i, i] = (_finite_at(f, p + ei) - 2.0 * center + _finite_at(f, p - ei)) / (h[i] * h[i])
        for j in range(dim):
            if j == i:
                continue
            ej = np.zeros(dim)
            ej[j] = h[j]
            hess[i, j] = (
                _finite_at(f, p + ei + ej)
                - _finite_at(f, p + ei - ej)
                - _finite_at(f, p - ei + ej)
                + _finite_at(f, p - ei - ej)
            ) / (4.0 * h[i] * h[j])

    return 0.5 * (hess + hess.T)
