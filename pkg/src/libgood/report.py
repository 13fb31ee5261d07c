"""Fit summaries and the versioned JSON fit record."""

import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from libgood.inference import (
    FitResult,
    LinkFunction,
    LrtResult,
    ModelData,
    WaldRow,
    aic,
    bic,
    fit_fixed_s,
    fit as fit_model,
    lrt,
    transformed_intercept,
    wald_table,
)
from libgood.optimize import OptimizerConfig
from libgood.types import SCHEMA_VERSION

logger = logging.getLogger(__name__)

RESIDUAL_LABELS = ("Min", "1Q", "Median", "3Q", "Max")
_P_FLOOR = 2.22e-16
_SEPARATOR = "--"


@dataclass
class SummaryReport:
    """Structured summary of a Good regression fit."""

    residual_quantiles: dict[str, float]
    coefficients: list[WaldRow]
    transformed: tuple[float, float] | None
    lrts: list[LrtResult]
    loglik: float
    aic: float
    bic: float
    text: str = field(default="", repr=False)


def _format_p(p: float) -> str:
    return f"< {_P_FLOOR}" if p < _P_FLOOR else f"{p:.6g}"


def _residual_block(quantiles: dict[str, float]) -> list[str]:
    values = [f"{v:.7f}" for v in quantiles.values()]
    width = max(len(v) for v in values + list(RESIDUAL_LABELS))
    return [
        "Response residuals:",
        " ".join(label.rjust(width) for label in RESIDUAL_LABELS),
        " ".join(v.rjust(width) for v in values),
    ]


def _coefficient_block(rows: list[WaldRow]) -> list[str]:
    name_width = max(len(r.name) for r in rows)
    lines = [
        "Coefficients:",
        f"{'':{name_width}} {'Estimate':>12} {'Std. Error':>12} {'z value':>11} {'p-value':>12}",
    ]
    for r in rows:
        lines.append(
            f"{r.name:<{name_width}} {r.estimate:>12.7f} {r.std_error:>12.7f} "
            f"{r.z_value:>11.6f} {_format_p(r.p_value):>12}"
        )
    return lines


def _lrt_block(test: LrtResult) -> list[str]:
    return [
        "Likelihood ratio test:",
        f"Model 1: {test.null_label}",
        f"Model 2: {test.alt_label}",
        f"  {'#Df':>4} {'LogLik':>10} {'Df':>3} {'LRT':>9} {'p.value':>11}",
        f"1 {test.n_params_null:>4} {test.loglik_null:>10.2f}",
        f"2 {test.n_params_alt:>4} {test.loglik_alt:>10.2f} {test.df:>3} "
        f"{test.statistic:>9.4f} {_format_p(test.p_value):>11}",
    ]


def render_summary(report: SummaryReport) -> str:
    """Lay out a SummaryReport as the plain-text summary block."""
    blocks = [_residual_block(report.residual_quantiles), _coefficient_block(report.coefficients)]
    if report.transformed is not None:
        z_hat, se = report.transformed
        blocks.append(
            [
                "Transformed intercept-only parameter",
                f"  {'Estimate':>10} {'Std. Error':>10}",
                f"z {z_hat:>10.7f} {se:>10.7f}",
            ]
        )
    for test in report.lrts:
        blocks.append(_lrt_block(test))
    blocks.append(
        [f"LogLik: {report.loglik:.2f}    AIC: {report.aic:.2f}    BIC: {report.bic:.2f}"]
    )

    lines: list[str] = []
    for i, block in enumerate(blocks):
        if i:
            lines.append(_SEPARATOR)
        lines.extend(block)
    return "\n".join(lines)


def null_tests(
    fit: FitResult,
    data: ModelData,
    config: OptimizerConfig | None = None,
) -> list[LrtResult]:
    """Likelihood ratio tests against the standard nulls.

    Intercept-only fits are tested against the logarithmic (s=1) and
    geometric (s=0) distributions; fits with covariates against the
    intercept-only model under the same link.
    """
    if fit.s_fixed:
        return []
    if data.p == 0:
        return [
            lrt(fit_fixed_s(data, 1.0, fit.link, config), fit, "logarithmic (s=1)", "good"),
            lrt(fit_fixed_s(data, 0.0, fit.link, config), fit, "geometric (s=0)", "good"),
        ]
    null = fit_model(data.intercept_only(), fit.link, config=config)
    covariates = " + ".join(data.covariate_names)
    return [
        lrt(
            null,
            fit,
            f"{data.response_name} ~ 1",
            f"{data.response_name} ~ {covariates}",
        )
    ]


def summary_report(
    fit: FitResult,
    data: ModelData,
    config: OptimizerConfig | None = None,
    lrts: list[LrtResult] | None = None,
) -> SummaryReport:
    """Build the summary: residual quantiles, Wald table, transformed
    intercept (p = 0), likelihood ratio tests and information criteria.

    Args:
        fit: Fitted model
        data: Data the model was fitted on
        config: Optimizer settings for the null refits
        lrts: Precomputed tests; computed with null_tests when None
    """
    residuals = data.response - fit.fitted_means
    quantiles = np.quantile(residuals, [0.0, 0.25, 0.5, 0.75, 1.0])
    # Residuals whose magnitude is pure rounding noise print as zero
    quantiles = np.where(np.abs(quantiles) < 1e-12, 0.0, quantiles)

    report = SummaryReport(
        residual_quantiles=dict(zip(RESIDUAL_LABELS, map(float, quantiles))),
        coefficients=wald_table(fit),
        transformed=transformed_intercept(fit) if fit.p == 0 else None,
        lrts=null_tests(fit, data, config) if lrts is None else lrts,
        loglik=fit.loglik,
        aic=aic(fit),
        bic=bic(fit),
    )
    report.text = render_summary(report)
    return report


class FitRecord(BaseModel):
    """JSON record of a fit, versioned by the schema field."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    link: LinkFunction
    covariate_names: list[str] = Field(default_factory=list)
    n: int = Field(ge=1)
    n_params: int = Field(ge=1)
    s_fixed: bool = False
    s_hat: float
    beta_hat: list[float]
    se: list[float]
    vcov: list[list[float]]
    hessian: list[list[float]]
    loglik: float
    aic: float
    bic: float
    lrt: list[dict] = Field(default_factory=list)
    fitted: list[float]
    frequencies: list[dict] | None = None  # Observed vs expected, intercept-only fits

    @classmethod
    def from_fit(cls, fit: FitResult, lrts: list[LrtResult] | None = None) -> "FitRecord":
        return cls(
            link=fit.link,
            covariate_names=list(fit.covariate_names),
            n=fit.n,
            n_params=fit.n_params,
            s_fixed=fit.s_fixed,
            s_hat=fit.s_hat,
            beta_hat=fit.beta_hat.tolist(),
            se=fit.std_errors.tolist(),
            vcov=fit.vcov.tolist(),
            hessian=fit.hessian.tolist(),
            loglik=fit.loglik,
            aic=aic(fit),
            bic=bic(fit),
            lrt=[asdict(test) for test in lrts or []],
            fitted=fit.fitted_means.tolist(),
        )

    def to_fit(self) -> FitResult:
        """Rebuild the FitResult this record was made from."""
        if self.schema_version != SCHEMA_VERSION:
            logger.warning(
                "Fit record schema %d differs from supported schema %d",
                self.schema_version,
                SCHEMA_VERSION,
            )
        return FitResult(
            s_hat=self.s_hat,
            beta_hat=np.asarray(self.beta_hat, dtype=float),
            link=self.link,
            loglik=self.loglik,
            hessian=np.asarray(self.hessian, dtype=float),
            vcov=np.asarray(self.vcov, dtype=float),
            fitted_means=np.asarray(self.fitted, dtype=float),
            n=self.n,
            n_params=self.n_params,
            covariate_names=tuple(self.covariate_names),
            s_fixed=self.s_fixed,
        )

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FitRecord":
        return cls.model_validate_json(text)

