"""Tests for fit summaries and the JSON fit record."""

import json

import numpy as np
import pytest

from libgood import (
    FitRecord,
    FitResult,
    LinkFunction,
    ModelData,
    fit_fixed_s,
    null_tests,
    summary_report,
)
from libgood.report import RESIDUAL_LABELS, render_summary


class TestSummaryReport:
    def test_residual_quantiles(self, discoveries_report):
        expected = [-3.1002, -1.1002, -0.1002, 0.8998, 8.8998]
        assert list(discoveries_report.residual_quantiles) == list(RESIDUAL_LABELS)
        np.testing.assert_allclose(
            list(discoveries_report.residual_quantiles.values()), expected, atol=1e-3
        )

    def test_null_tests(self, discoveries_report):
        vs_log, vs_geo = discoveries_report.lrts
        assert vs_log.null_label == "logarithmic (s=1)"
        assert vs_geo.null_label == "geometric (s=0)"
        assert vs_log.statistic == pytest.approx(83.44, abs=0.02)
        assert vs_geo.statistic == pytest.approx(34.09, abs=0.02)

    def test_transformed_intercept(self, discoveries_report):
        z_hat, se = discoveries_report.transformed
        assert z_hat == pytest.approx(0.4362, abs=0.0005)
        assert se == pytest.approx(0.05565, rel=0.02)

    def test_text(self, discoveries_report):
        lines = discoveries_report.text.splitlines()
        assert lines[0] == "Response residuals:"
        assert lines[-1] == "LogLik: -210.73    AIC: 425.45    BIC: 430.66"
        assert "Coefficients:" in lines
        assert "Transformed intercept-only parameter" in lines
        assert "Model 1: logarithmic (s=1)" in lines
        assert "Model 1: geometric (s=0)" in lines
        assert lines.count("Model 2: good") == 2
        assert any(line.startswith("s ") for line in lines)
        assert any(line.startswith("(Intercept)") for line in lines)
        assert "< 2.22e-16" in discoveries_report.text

    def test_render_is_stable(self, discoveries_report):
        assert render_summary(discoveries_report) == discoveries_report.text

    def test_rounding_noise_residuals_print_as_zero(self):
        result = FitResult(
            s_hat=-3.0,
            beta_hat=np.array([-1.0]),
            link=LinkFunction.LOG,
            loglik=-4.0,
            hessian=-np.eye(2),
            vcov=np.eye(2),
            fitted_means=np.full(4, 2.0 + 1e-14),
            n=4,
            n_params=2,
        )
        report = summary_report(result, ModelData([2, 2, 2, 2]), lrts=[])
        assert list(report.residual_quantiles.values()) == [0.0] * 5
        assert report.lrts == []
        assert "Likelihood ratio test:" not in report.text
        assert "0.0000000" in report.text.splitlines()[2]

    def test_covariate_report(self, synthetic_covariate_fit, synthetic_covariate_data):
        report = summary_report(synthetic_covariate_fit, synthetic_covariate_data)
        assert report.transformed is None
        assert "Transformed intercept-only parameter" not in report.text
        (test,) = report.lrts
        assert test.null_label == "y ~ 1"
        assert test.alt_label == "y ~ x"
        assert test.df == 1
        assert test.statistic >= 0.0
        assert [row.name for row in report.coefficients] == ["s", "(Intercept)", "x"]

    def test_fixed_shape_fit_has_no_null_tests(self, discoveries_data):
        geometric = fit_fixed_s(discoveries_data, 0.0, LinkFunction.LOG)
        assert null_tests(geometric, discoveries_data) == []


class TestFitRecord:
    def test_round_trip(self, discoveries_fit, discoveries_report):
        record = FitRecord.from_fit(discoveries_fit, discoveries_report.lrts)
        restored = FitRecord.from_json(record.to_json()).to_fit()

        assert restored.s_hat == discoveries_fit.s_hat
        np.testing.assert_array_equal(restored.beta_hat, discoveries_fit.beta_hat)
        np.testing.assert_array_equal(restored.vcov, discoveries_fit.vcov)
        np.testing.assert_array_equal(restored.fitted_means, discoveries_fit.fitted_means)
        assert restored.link is LinkFunction.LOG
        assert restored.n_params == 2
        assert not restored.s_fixed

    def test_json_layout(self, discoveries_fit, discoveries_report):
        payload = json.loads(FitRecord.from_fit(discoveries_fit, discoveries_report.lrts).to_json())
        assert payload["schema"] == 1
        assert payload["link"] == "log"
        assert payload["aic"] == pytest.approx(425.45, abs=0.02)
        assert len(payload["fitted"]) == 100
        assert len(payload["lrt"]) == 2
        assert payload["lrt"][1]["null_label"] == "geometric (s=0)"
        assert "frequencies" not in payload

    def test_schema_mismatch_still_loads(self, discoveries_fit, caplog):
        payload = json.loads(FitRecord.from_fit(discoveries_fit).to_json())
        payload["schema"] = 99
        record = FitRecord.model_validate(payload)
        assert record.to_fit().loglik == discoveries_fit.loglik
        assert "schema 99" in caplog.text
