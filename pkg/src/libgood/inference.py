"""Maximum-likelihood Good regression.

The response X_i ~ Good(z_i, s) with a common shape s and
z_i = h^-1(beta_0 + x_i . beta_1..p) for a link h. Parameter vectors are
ordered (s, beta_0, ..., beta_p) everywhere: likelihood argument, Hessian,
variance-covariance matrix and mean gradients.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import expit
from scipy.stats import chi2, norm

from libgood.exceptions import (
    ConvergenceError,
    DataError,
    DimensionError,
    InfeasibleParameterError,
    NestingError,
    NumericalError,
    PreconditionError,
    SingularHessianError,
)
from libgood.optimize import OptimizerConfig, maximize, numeric_hessian
from libgood.specfun import log_polylog, log_polylog_ds, log_polylog_many

logger = logging.getLogger(__name__)

_LRT_TOLERANCE = 1e-8
_MAX_CONDITION = 1e12


class LinkFunction(str, Enum):
    """Link h between z and the linear predictor eta: z = h^-1(eta)."""

    IDENTITY = "identity"
    LOG = "log"
    LOGIT = "logit"

    @property
    def default_intercept(self) -> float:
        """Starting intercept that maps to z = 0.5."""
        return {
            LinkFunction.IDENTITY: 0.5,
            LinkFunction.LOG: math.log(0.5),
            LinkFunction.LOGIT: 0.0,
        }[self]

    def inverse(self, eta: ArrayLike) -> np.ndarray:
        """z = h^-1(eta)."""
        eta = np.asarray(eta, dtype=float)
        if self is LinkFunction.IDENTITY:
            return eta
        if self is LinkFunction.LOG:
            return np.exp(eta)
        return expit(eta)

    def log_inverse(self, eta: ArrayLike) -> np.ndarray:
        """log z, NaN where z <= 0."""
        eta = np.asarray(eta, dtype=float)
        if self is LinkFunction.IDENTITY:
            with np.errstate(invalid="ignore", divide="ignore"):
                return np.where(eta > 0.0, np.log(np.where(eta > 0.0, eta, 1.0)), np.nan)
        if self is LinkFunction.LOG:
            return eta
        return -np.logaddexp(0.0, -eta)

    def derivative(self, eta: ArrayLike) -> np.ndarray:
        """dz/d eta."""
        eta = np.asarray(eta, dtype=float)
        if self is LinkFunction.IDENTITY:
            return np.ones_like(eta)
        if self is LinkFunction.LOG:
            return np.exp(eta)
        z = expit(eta)
        return z * expit(-eta)

    def log_derivative(self, eta: ArrayLike) -> np.ndarray:
        """d log z / d eta: 1/z, 1 and 1 - z for identity, log and logit."""
        eta = np.asarray(eta, dtype=float)
        if self is LinkFunction.IDENTITY:
            return 1.0 / eta
        if self is LinkFunction.LOG:
            return np.ones_like(eta)
        return expit(-eta)


@dataclass
class ModelData:
    """Response counts with an optional covariate matrix (intercept implicit)."""

    response: np.ndarray
    covariates: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    covariate_names: tuple[str, ...] = ()
    response_name: str = "y"

    def __post_init__(self) -> None:
        response = np.asarray(self.response)
        if response.ndim != 1 or response.size < 1:
            raise DataError("Response must be a non-empty vector")
        as_int = response.astype(np.int64)
        if np.any(as_int != response) or np.any(as_int < 0):
            raise DataError("Response must contain non-negative integers")
        self.response = as_int

        covariates = np.asarray(self.covariates, dtype=float)
        if covariates.size == 0:
            covariates = np.zeros((as_int.size, 0))
        if covariates.ndim == 1:
            covariates = covariates[:, np.newaxis]
        if covariates.shape[0] != as_int.size:
            raise DimensionError(
                f"Covariate matrix has {covariates.shape[0]} rows for {as_int.size} responses"
            )
        if not np.all(np.isfinite(covariates)):
            raise DataError("Covariate matrix contains non-finite entries")
        self.covariates = covariates

        names = tuple(self.covariate_names)
        if not names and covariates.shape[1]:
            names = tuple(f"x{j + 1}" for j in range(covariates.shape[1]))
        if len(names) != covariates.shape[1]:
            raise DimensionError(
                f"{len(names)} covariate names for {covariates.shape[1]} columns"
            )
        self.covariate_names = names

        for j, name in enumerate(names):
            if np.ptp(covariates[:, j]) == 0.0:
                raise DataError(f"Covariate '{name}' has zero variance")

    @property
    def n(self) -> int:
        return int(self.response.size)

    @property
    def p(self) -> int:
        return int(self.covariates.shape[1])

    def design_matrix(self) -> np.ndarray:
        """Covariates with a leading intercept column."""
        return np.column_stack((np.ones(self.n), self.covariates))

    def intercept_only(self) -> "ModelData":
        return ModelData(self.response, response_name=self.response_name)


@dataclass
class FitResult:
    """Fitted Good regression.

    When s_fixed is True the shape was pinned: hessian and vcov then cover
    beta only and n_params counts beta only.
    """

    s_hat: float
    beta_hat: np.ndarray
    link: LinkFunction
    loglik: float
    hessian: np.ndarray
    vcov: np.ndarray
    fitted_means: np.ndarray
    n: int
    n_params: int
    covariate_names: tuple[str, ...] = ()
    s_fixed: bool = False
    iterations: int = 0

    @property
    def p(self) -> int:
        return int(self.beta_hat.size - 1)

    @property
    def parameter_names(self) -> list[str]:
        names = ["(Intercept)", *self.covariate_names]
        return names if self.s_fixed else ["s", *names]

    @property
    def estimates(self) -> np.ndarray:
        """Free parameters in vcov order."""
        if self.s_fixed:
            return self.beta_hat.copy()
        return np.concatenate(([self.s_hat], self.beta_hat))

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.vcov))


@dataclass(frozen=True)
class WaldRow:
    """One coefficient row of a Wald table."""

    name: str
    estimate: float
    std_error: float
    z_value: float
    p_value: float


@dataclass(frozen=True)
class LrtResult:
    """Likelihood ratio test between nested fits."""

    null_label: str
    alt_label: str
    df: int
    statistic: float
    p_value: float
    loglik_null: float
    loglik_alt: float
    n_params_null: int
    n_params_alt: int


@dataclass
class PredictionResult:
    """Predicted means with delta-method standard errors."""

    fit: np.ndarray
    se_fit: np.ndarray


def _linear_predictor(beta: np.ndarray, covariates: np.ndarray) -> np.ndarray:
    return beta[0] + covariates @ beta[1:]


def log_likelihood(
    data: ModelData,
    beta: ArrayLike,
    s: float,
    link: LinkFunction,
) -> float:
    """Good log-likelihood; -inf if any linked z_i lies outside (0, 1).

    Raises:
        DimensionError: If beta does not have p + 1 entries
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.p + 1,):
        raise DimensionError(f"beta must have {data.p + 1} entries, got {beta.shape}")
    if not math.isfinite(s):
        return -math.inf

    log_z = link.log_inverse(_linear_predictor(beta, data.covariates))
    if not np.all(np.isfinite(log_z) & (log_z < 0.0)):
        return -math.inf

    n1 = data.response + 1.0
    terms = n1 * log_z - s * np.log(n1) - log_polylog_many(log_z, s)
    return float(math.fsum(terms))


def default_start(link: LinkFunction, p: int) -> tuple[float, np.ndarray]:
    """Starting (s, beta): s = -2 and beta chosen so every z_i starts at 0.5."""
    if p < 0:
        raise DimensionError(f"p must be non-negative, got {p}")
    beta = np.zeros(p + 1)
    beta[0] = link.default_intercept
    return -2.0, beta


def _guarded(objective):
    """Treat a series that cannot be summed as an infeasible point."""

    def wrapped(theta: np.ndarray) -> float:
        try:
            return objective(theta)
        except NumericalError as e:
            logger.debug("Objective infeasible at %s: %s", theta.tolist(), e)
            return -math.inf

    return wrapped


def _require_interior(data: ModelData) -> None:
    if not data.response.any():
        raise ConvergenceError(
            "All responses are zero: the likelihood increases without bound as z -> 0",
            iterations=0,
        )


def _invert_information(hessian: np.ndarray) -> np.ndarray:
    information = -hessian
    try:
        condition = float(np.linalg.cond(information))
    except np.linalg.LinAlgError:
        condition = math.inf
    logger.debug("Observed information condition number %.3g", condition)
    if not math.isfinite(condition) or condition > _MAX_CONDITION:
        raise SingularHessianError("Observed information is singular", condition)
    try:
        vcov = np.linalg.inv(information)
    except np.linalg.LinAlgError as e:
        raise SingularHessianError(f"Observed information inversion failed: {e}", condition)
    if np.any(np.diag(vcov) <= 0.0):
        raise SingularHessianError("Observed information is not positive definite", condition)
    return 0.5 * (vcov + vcov.T)


def _fitted(s: float, beta: np.ndarray, link: LinkFunction, data: ModelData) -> np.ndarray:
    """fitted_mean per observation, evaluated once per distinct covariate row."""
    if data.p == 0:
        return np.full(data.n, fitted_mean(s, beta, link))
    rows, inverse = np.unique(data.covariates, axis=0, return_inverse=True)
    means = np.array([fitted_mean(s, beta, link, row) for row in rows])
    return means[inverse.reshape(-1)]


def fit(
    data: ModelData,
    link: LinkFunction = LinkFunction.LOG,
    start: tuple[float, ArrayLike] | None = None,
    config: OptimizerConfig | None = None,
) -> FitResult:
    """Maximize the likelihood over (s, beta).

    Raises:
        InfeasibleStartError: If a supplied start maps some z_i outside (0, 1)
        ConvergenceError: If the optimizer exhausts its iterations
        SingularHessianError: If the observed information cannot be inverted
    """
    config = config or OptimizerConfig()
    _require_interior(data)
    s0, beta0 = start if start is not None else default_start(link, data.p)
    theta0 = np.concatenate(([float(s0)], np.asarray(beta0, dtype=float)))
    if theta0.size != data.p + 2:
        raise DimensionError(f"Start must have {data.p + 2} entries, got {theta0.size}")

    def objective(theta: np.ndarray) -> float:
        return log_likelihood(data, theta[1:], theta[0], link)

    guarded = _guarded(objective)
    result = maximize(guarded, theta0, config)
    if not result.converged:
        raise ConvergenceError(
            f"Good fit did not converge after {result.iterations} iterations",
            point=result.point,
            value=result.value,
            iterations=result.iterations,
        )

    theta = result.point
    hessian = numeric_hessian(objective, theta, config.hessian_step)
    vcov = _invert_information(hessian)
    s_hat, beta_hat = float(theta[0]), theta[1:].copy()
    logger.info("Fitted Good model (%s link): s=%.6f loglik=%.4f", link.value, s_hat, result.value)

    return FitResult(
        s_hat=s_hat,
        beta_hat=beta_hat,
        link=link,
        loglik=objective(theta),
        hessian=hessian,
        vcov=vcov,
        fitted_means=_fitted(s_hat, beta_hat, link, data),
        n=data.n,
        n_params=data.p + 2,
        covariate_names=data.covariate_names,
        iterations=result.iterations,
    )


def fit_fixed_s(
    data: ModelData,
    s_fixed: float,
    link: LinkFunction = LinkFunction.LOG,
    config: OptimizerConfig | None = None,
) -> FitResult:
    """Maximize the likelihood over beta with s pinned (logarithmic s=1, geometric s=0)."""
    config = config or OptimizerConfig()
    _require_interior(data)
    _, beta0 = default_start(link, data.p)

    def objective(beta: np.ndarray) -> float:
        return log_likelihood(data, beta, s_fixed, link)

    result = maximize(_guarded(objective), beta0, config)
    if not result.converged:
        raise ConvergenceError(
            f"Fixed-s fit (s={s_fixed}) did not converge after {result.iterations} iterations",
            point=result.point,
            value=result.value,
            iterations=result.iterations,
        )

    beta_hat = result.point.copy()
    hessian = numeric_hessian(objective, beta_hat, config.hessian_step)
    vcov = _invert_information(hessian)

    return FitResult(
        s_hat=float(s_fixed),
        beta_hat=beta_hat,
        link=link,
        loglik=objective(beta_hat),
        hessian=hessian,
        vcov=vcov,
        fitted_means=_fitted(float(s_fixed), beta_hat, link, data),
        n=data.n,
        n_params=data.p + 1,
        covariate_names=data.covariate_names,
        s_fixed=True,
        iterations=result.iterations,
    )


def wald_table(fit: FitResult) -> list[WaldRow]:
    """Estimate, standard error, z value and two-sided normal p-value per parameter."""
    rows = []
    for name, estimate, se in zip(fit.parameter_names, fit.estimates, fit.std_errors):
        z_value = estimate / se
        rows.append(
            WaldRow(
                name=name,
                estimate=float(estimate),
                std_error=float(se),
                z_value=float(z_value),
                p_value=float(2.0 * norm.sf(abs(z_value))),
            )
        )
    return rows


def transformed_intercept(fit: FitResult) -> tuple[float, float]:
    """Point estimate and univariate delta-method standard error of z.

    Raises:
        PreconditionError: If the fit has covariates
    """
    if fit.p != 0:
        raise PreconditionError("Transformed intercept requires an intercept-only fit")
    eta = fit.beta_hat[0]
    se_eta = fit.std_errors[-1]
    z_hat = float(fit.link.inverse(eta))
    return z_hat, float(se_eta * abs(fit.link.derivative(eta)))


def lrt(
    null: FitResult,
    alt: FitResult,
    null_label: str = "null",
    alt_label: str = "alternative",
) -> LrtResult:
    """Likelihood ratio test of a nested null against an alternative.

    Fits with equal parameter counts compare as df = 0 only when their
    log-likelihoods agree; the statistic is then 0 with p-value 1.

    Raises:
        NestingError: If the null has more parameters, a higher
            log-likelihood beyond tolerance, or equal parameters with a
            different log-likelihood
    """
    df = alt.n_params - null.n_params
    if df < 0:
        raise NestingError(
            f"Null model has more parameters than the alternative "
            f"({null.n_params} vs {alt.n_params})"
        )
    statistic = 2.0 * (alt.loglik - null.loglik)
    if statistic < -_LRT_TOLERANCE:
        raise NestingError(
            f"Null log-likelihood {null.loglik:.6f} exceeds alternative {alt.loglik:.6f}"
        )
    if df == 0 and statistic > _LRT_TOLERANCE:
        raise NestingError(
            f"Models with {alt.n_params} parameters each differ in log-likelihood "
            f"({null.loglik:.6f} vs {alt.loglik:.6f}) and cannot be nested"
        )
    if statistic < 0.0 or df == 0:
        if statistic != 0.0:
            logger.warning("Clamping LRT statistic %.3g to 0", statistic)
        statistic = 0.0

    return LrtResult(
        null_label=null_label,
        alt_label=alt_label,
        df=df,
        statistic=statistic,
        p_value=float(chi2.sf(statistic, df)) if statistic > 0.0 else 1.0,
        loglik_null=null.loglik,
        loglik_alt=alt.loglik,
        n_params_null=null.n_params,
        n_params_alt=alt.n_params,
    )


def aic(fit: FitResult) -> float:
    return -2.0 * fit.loglik + 2.0 * fit.n_params


def bic(fit: FitResult) -> float:
    return -2.0 * fit.loglik + fit.n_params * math.log(fit.n)


def _linked_log_z(
    beta: np.ndarray, link: LinkFunction, covariate_row: ArrayLike
) -> tuple[float, float]:
    beta = np.asarray(beta, dtype=float)
    row = np.atleast_1d(np.asarray(covariate_row, dtype=float))
    if row.size != beta.size - 1:
        raise DimensionError(f"Covariate row has {row.size} entries, expected {beta.size - 1}")
    eta = float(beta[0] + row @ beta[1:])
    log_z = float(link.log_inverse(eta))
    if not (math.isfinite(log_z) and log_z < 0.0):
        raise InfeasibleParameterError(
            f"Linear predictor {eta} maps outside (0, 1) under the {link.value} link"
        )
    return eta, log_z


def fitted_mean(
    s: float,
    beta: ArrayLike,
    link: LinkFunction,
    covariate_row: ArrayLike = (),
) -> float:
    """Good mean F(z, s-1) / F(z, s) - 1 at z = h^-1(beta_0 + row . beta_1..p)."""
    _, log_z = _linked_log_z(np.asarray(beta, dtype=float), link, covariate_row)
    return math.exp(log_polylog(log_z, s - 1.0).value - log_polylog(log_z, s).value) - 1.0


def mean_gradient(
    s: float,
    beta: ArrayLike,
    link: LinkFunction,
    covariate_row: ArrayLike = (),
) -> np.ndarray:
    """Gradient of fitted_mean with respect to (s, beta_0, ..., beta_p).

    With r1 = F(z,s-1)/F(z,s) and r2 = F(z,s-2)/F(z,s-1):
      d mu / ds      = r1 * (d ln F(z,s-1)/ds - d ln F(z,s)/ds)
      d mu / d beta_j = x_ij * r1 * (r2 - r1) * d ln z / d eta
    Since dF(z,s)/dz = F(z,s-1)/z, this is the chain rule through
    dz/d eta for the identity, log and logit links.
    """
    beta = np.asarray(beta, dtype=float)
    eta, log_z = _linked_log_z(beta, link, covariate_row)
    row = np.concatenate(([1.0], np.atleast_1d(np.asarray(covariate_row, dtype=float))))

    l0 = log_polylog(log_z, s).value
    l1 = log_polylog(log_z, s - 1.0).value
    l2 = log_polylog(log_z, s - 2.0).value
    r1 = math.exp(l1 - l0)
    r2 = math.exp(l2 - l1)

    d_s = r1 * (log_polylog_ds(log_z, s - 1.0) - log_polylog_ds(log_z, s))
    d_eta = r1 * (r2 - r1) * float(link.log_derivative(eta))
    return np.concatenate(([d_s], d_eta * row))


def predict_with_se(fit: FitResult, new_covariates: ArrayLike | None = None) -> PredictionResult:
    """Predicted means and multivariate delta-method standard errors.

    Args:
        fit: Fitted model
        new_covariates: m x p matrix; None predicts a single intercept-only row

    Raises:
        DimensionError: If the column count does not match the fit
    """
    if new_covariates is None:
        rows = np.zeros((1, fit.p))
    else:
        rows = np.asarray(new_covariates, dtype=float)
        if rows.ndim == 1:
            rows = rows[:, np.newaxis] if fit.p == 1 else rows.reshape(1, -1)
    if rows.ndim != 2 or rows.shape[1] != fit.p:
        raise DimensionError(f"New covariates must have {fit.p} columns, got {rows.shape}")

    means = np.empty(rows.shape[0])
    se = np.empty(rows.shape[0])
    for i, row in enumerate(rows):
        means[i] = fitted_mean(fit.s_hat, fit.beta_hat, fit.link, row)
        grad = mean_gradient(fit.s_hat, fit.beta_hat, fit.link, row)
        if fit.s_fixed:
            grad = grad[1:]
        se[i] = math.sqrt(max(float(grad @ fit.vcov @ grad), 0.0))
    return PredictionResult(fit=means, se_fit=se)
