"""Tests for the Nelder-Mead driver and numeric derivatives."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from libgood import (
    EvaluationError,
    InfeasibleStartError,
    OptimizerConfig,
    maximize,
    numeric_gradient,
    numeric_hessian,
)


def concave_quadratic(p: np.ndarray) -> float:
    return -((p[0] - 1.0) ** 2) - 2.0 * (p[1] + 3.0) ** 2


def negative_rosenbrock(p: np.ndarray) -> float:
    return -((1.0 - p[0]) ** 2 + 100.0 * (p[1] - p[0] ** 2) ** 2)


class TestMaximize:
    def test_quadratic(self):
        result = maximize(concave_quadratic, [0.0, 0.0])
        assert result.converged
        np.testing.assert_allclose(result.point, [1.0, -3.0], atol=1e-5)
        assert result.value == pytest.approx(0.0, abs=1e-10)
        assert result.iterations > 0

    def test_rosenbrock(self):
        result = maximize(negative_rosenbrock, [-1.2, 1.0])
        assert result.converged
        np.testing.assert_allclose(result.point, [1.0, 1.0], atol=1e-4)

    def test_infeasible_region_acts_as_wall(self):
        def walled(p: np.ndarray) -> float:
            return -math.inf if p[0] < 0.5 else -((p[0] - 0.5) ** 2) - 0.1 * p[0]

        result = maximize(walled, [2.0])
        assert result.point[0] >= 0.5
        assert result.point[0] == pytest.approx(0.5, abs=1e-5)

    @pytest.mark.parametrize("value", [-math.inf, math.nan])
    def test_infeasible_start(self, value):
        with pytest.raises(InfeasibleStartError):
            maximize(lambda p: value, [0.0])

    def test_iteration_budget_reports_non_convergence(self):
        result = maximize(negative_rosenbrock, [-1.2, 1.0], OptimizerConfig(max_iterations=5))
        assert not result.converged
        assert result.iterations <= 5
        assert math.isfinite(result.value)

    def test_never_worse_than_start(self):
        start = np.array([3.0, 3.0])
        result = maximize(concave_quadratic, start, OptimizerConfig(max_iterations=3))
        assert result.value >= concave_quadratic(start)

    def test_restarts_accumulate_iterations(self):
        single = maximize(concave_quadratic, [0.0, 0.0], OptimizerConfig(restarts=0))
        restarted = maximize(concave_quadratic, [0.0, 0.0], OptimizerConfig(restarts=2))
        assert restarted.iterations > single.iterations
        assert restarted.value >= single.value


class TestOptimizerConfig:
    def test_defaults(self):
        config = OptimizerConfig()
        assert config.tolerance == 1e-10
        assert config.max_iterations == 50_000
        assert config.restarts == 1

    @pytest.mark.parametrize(
        "field,value", [("tolerance", 0.0), ("max_iterations", 0), ("restarts", -1)]
    )
    def test_rejects_invalid(self, field, value):
        with pytest.raises(ValidationError):
            OptimizerConfig(**{field: value})


class TestDerivatives:
    def test_gradient(self):
        f = lambda p: math.sin(p[0]) * p[1] ** 2
        point = np.array([0.3, 2.0])
        expected = [math.cos(0.3) * 4.0, 2.0 * math.sin(0.3) * 2.0]
        np.testing.assert_allclose(numeric_gradient(f, point), expected, rtol=1e-8)

    def test_hessian_of_quadratic(self):
        f = lambda p: p[0] ** 2 + 3.0 * p[0] * p[1] - 0.5 * p[1] ** 2
        hessian = numeric_hessian(f, [1.0, -2.0])
        np.testing.assert_allclose(hessian, [[2.0, 3.0], [3.0, -1.0]], atol=1e-5)
        np.testing.assert_array_equal(hessian, hessian.T)

    def test_hessian_relative_step_for_large_coordinates(self):
        f = lambda p: -0.5 * (p[0] / 100.0) ** 2
        hessian = numeric_hessian(f, [-250.0])
        assert hessian[0, 0] == pytest.approx(-1e-4, rel=1e-4)

    def test_non_finite_evaluation_raises(self):
        f = lambda p: math.log(p[0]) if p[0] > 0 else -math.inf
        with pytest.raises(EvaluationError):
            numeric_gradient(f, [1e-7])
        with pytest.raises(EvaluationError):
            numeric_hessian(f, [1e-7])
