"""Shared fixtures: embedded datasets and their fitted intercept-only models."""

import numpy as np
import pytest

from libgood import (
    GoodParams,
    LinkFunction,
    ModelData,
    fit,
    get_dataset,
    sample,
    summary_report,
)


@pytest.fixture(scope="session")
def discoveries_data() -> ModelData:
    return get_dataset("discoveries").model_data()


@pytest.fixture(scope="session")
def strikes_data() -> ModelData:
    return get_dataset("strikes").model_data()


@pytest.fixture(scope="session")
def polarbears_data() -> ModelData:
    return get_dataset("polarbears").model_data()


@pytest.fixture(scope="session")
def discoveries_fit(discoveries_data):
    return fit(discoveries_data, LinkFunction.LOG)


@pytest.fixture(scope="session")
def strikes_fit(strikes_data):
    return fit(strikes_data, LinkFunction.LOG)


@pytest.fixture(scope="session")
def polarbears_fit(polarbears_data):
    return fit(polarbears_data, LinkFunction.LOG)


@pytest.fixture(scope="session")
def discoveries_report(discoveries_fit, discoveries_data):
    return summary_report(discoveries_fit, discoveries_data)


@pytest.fixture
def geometric() -> GoodParams:
    """Good(0.5, 0): geometric with P(X = x) = 0.5^(x+1)."""
    return GoodParams.from_z(0.5, 0.0)


@pytest.fixture
def discoveries_params() -> GoodParams:
    return GoodParams.from_z(0.4362, -2.4022)


@pytest.fixture(scope="session")
def synthetic_covariate_data() -> ModelData:
    """Counts from a logit-link Good regression on a parity-like covariate."""
    rng = np.random.default_rng(20240611)
    x = rng.integers(0, 11, size=400).astype(float)
    beta = np.array([-0.4, -0.05])
    s = -3.0
    z = LinkFunction.LOGIT.inverse(beta[0] + beta[1] * x)
    y = np.array([sample(1, GoodParams.from_z(float(zi), s), rng=rng)[0] for zi in z])
    return ModelData(y, x[:, np.newaxis], ("x",))


@pytest.fixture(scope="session")
def synthetic_covariate_fit(synthetic_covariate_data):
    return fit(synthetic_covariate_data, LinkFunction.LOGIT)
