"""Good distribution library.

This package provides the polylogarithm normalizer, the Good distribution
(pmf, cdf, quantile, sampling, moments) and maximum-likelihood Good
regression with Wald, likelihood ratio and delta-method inference.
"""

from libgood.datasets import (
    DatasetRegistryEntry,
    dataset,
    get_dataset,
    list_datasets,
    load_covariates,
    load_csv,
)
from libgood.distribution import (
    DispersionCell,
    cdf,
    classify_dispersion,
    dispersion_grid,
    dispersion_index,
    expected_frequencies,
    log_pmf,
    mean,
    mgf,
    mode,
    pgf,
    pmf,
    quantile,
    raw_moment,
    sample,
    variance,
)
from libgood.exceptions import (
    CapExceededError,
    ConvergenceError,
    DataError,
    DimensionError,
    DomainError,
    EvaluationError,
    GoodError,
    InfeasibleParameterError,
    InfeasibleStartError,
    NestingError,
    NumericalError,
    PreconditionError,
    SingularHessianError,
    UnknownDatasetError,
)
from libgood.inference import (
    FitResult,
    LinkFunction,
    LrtResult,
    ModelData,
    PredictionResult,
    WaldRow,
    aic,
    bic,
    default_start,
    fit,
    fit_fixed_s,
    fitted_mean,
    log_likelihood,
    lrt,
    mean_gradient,
    predict_with_se,
    transformed_intercept,
    wald_table,
)
from libgood.optimize import (
    OptimizerConfig,
    OptimResult,
    maximize,
    numeric_gradient,
    numeric_hessian,
)
from libgood.report import FitRecord, SummaryReport, null_tests, summary_report
from libgood.specfun import (
    log_gamma,
    log_polylog,
    log_polylog_ds,
    log_polylog_many,
    log_polylog_series,
    log_polylog_wood,
)
from libgood.types import (
    DEFAULT_TH,
    QUANTILE_MAX_SUPPORT,
    SCHEMA_VERSION,
    SERIES_LOG_TOLERANCE,
    SERIES_MAX_TERMS,
    WOOD_THRESHOLD,
    DispersionKind,
    GoodParams,
    LogPolylogValue,
    Regime,
)

__version__ = "0.1.0"

__all__ = [
    # Types
    "DEFAULT_TH",
    "DispersionKind",
    "GoodParams",
    "LogPolylogValue",
    "QUANTILE_MAX_SUPPORT",
    "Regime",
    "SCHEMA_VERSION",
    "SERIES_LOG_TOLERANCE",
    "SERIES_MAX_TERMS",
    "WOOD_THRESHOLD",
    # Exceptions
    "CapExceededError",
    "ConvergenceError",
    "DataError",
    "DimensionError",
    "DomainError",
    "EvaluationError",
    "GoodError",
    "InfeasibleParameterError",
    "InfeasibleStartError",
    "NestingError",
    "NumericalError",
    "PreconditionError",
    "SingularHessianError",
    "UnknownDatasetError",
    # Special functions
    "log_gamma",
    "log_polylog",
    "log_polylog_ds",
    "log_polylog_many",
    "log_polylog_series",
    "log_polylog_wood",
    # Distribution
    "DispersionCell",
    "cdf",
    "classify_dispersion",
    "dispersion_grid",
    "dispersion_index",
    "expected_frequencies",
    "log_pmf",
    "mean",
    "mgf",
    "mode",
    "pgf",
    "pmf",
    "quantile",
    "raw_moment",
    "sample",
    "variance",
    # Optimization
    "OptimizerConfig",
    "OptimResult",
    "maximize",
    "numeric_gradient",
    "numeric_hessian",
    # Inference
    "FitResult",
    "LinkFunction",
    "LrtResult",
    "ModelData",
    "PredictionResult",
    "WaldRow",
    "aic",
    "bic",
    "default_start",
    "fit",
    "fit_fixed_s",
    "fitted_mean",
    "log_likelihood",
    "lrt",
    "mean_gradient",
    "predict_with_se",
    "transformed_intercept",
    "wald_table",
    # Reporting
    "FitRecord",
    "SummaryReport",
    "null_tests",
    "summary_report",
    # Datasets
    "DatasetRegistryEntry",
    "dataset",
    "get_dataset",
    "list_datasets",
    "load_covariates",
    "load_csv",
]
