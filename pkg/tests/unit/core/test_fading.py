"""
Tests for Rayleigh-fading averages: closed form, exact expressions and quadrature.
"""

import math

import numpy as np
import pytest

from fadeber.core import fading
from fadeber.core.fading import (
    ComparisonRow, FadingPoint,
    average_over_rayleigh, chi2_pdf, compare_curves, evaluate_mode, exact_fading_ber,
    generalized_fading_ber, generalized_fading_curve,
    rayleigh_q2_average, rayleigh_q_average,
)
from fadeber.core.gaussfit import GaussianFit
from fadeber.core.modulation import ModulationScheme, conditional_ber, scheme_constants
from fadeber.core.numerics import q_function
from fadeber.core.published import PUBLISHED_FITS
from fadeber.exceptions import InvalidParameterError
from tests.utils.helpers import printed_generalized_ber

GAMMAS = [0.1, 1.0, 10.0, 100.0, 1e4]
LOG_GRID = np.logspace(-3, 6, 500)


class TestChi2Pdf:
    """Test the exponential SNR density."""

    def test_values(self):
        assert chi2_pdf(0.0, 2.0) == 0.5
        assert chi2_pdf(2.0, 2.0) == pytest.approx(0.5 * math.exp(-1.0))

    def test_integrates_to_one(self):
        assert average_over_rayleigh(lambda xi: 1.0, 3.0) == pytest.approx(1.0, rel=1e-12)

    def test_invalid_arguments(self):
        with pytest.raises(InvalidParameterError):
            chi2_pdf(-1.0, 1.0)
        with pytest.raises(InvalidParameterError):
            chi2_pdf(1.0, 0.0)


class TestGeneralizedFadingBer:
    """Test the closed-form average of a Gaussian BER model."""

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_matches_quadrature(self, published_label, gamma):
        fit = PUBLISHED_FITS[published_label]
        closed = generalized_fading_ber(fit, gamma)
        numeric = average_over_rayleigh(fit.evaluate, gamma)
        assert abs(closed - numeric) / closed <= 1e-8

    def test_matches_expanded_form_where_it_is_finite(self, published_label):
        fit = PUBLISHED_FITS[published_label]
        for gamma in (fit.c / 50.0, fit.c / 10.0, 1.0, 10.0, 1e3, 1e4):
            expanded = printed_generalized_ber(fit.a, fit.b, fit.c, gamma)
            assert generalized_fading_ber(fit, gamma) == pytest.approx(expanded, rel=1e-12)

    def test_small_gamma_limit(self, published_label):
        fit = PUBLISHED_FITS[published_label]
        value = generalized_fading_ber(fit, 1e-9)
        limit = fit.a * math.exp(-(fit.b / fit.c) ** 2)

        assert math.isfinite(value)
        assert value == pytest.approx(limit, rel=1e-6)
        assert not math.isfinite(printed_generalized_ber(fit.a, fit.b, fit.c, 1e-9))

    def test_qpsk_high_snr_asymptote(self, qpsk_published_fit):
        gamma = 1e6
        scaled = gamma * generalized_fading_ber(qpsk_published_fit, gamma)
        assert scaled == pytest.approx(0.1768, abs=1e-4)

    @pytest.mark.parametrize("label", ["QPSK", "BFSK", "BASK"])
    def test_decreasing_for_non_positive_centre(self, label):
        fit = PUBLISHED_FITS[label]
        values = [generalized_fading_ber(fit, g) for g in LOG_GRID]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("gamma", [1.0, 10.0, 1e3, 1e6])
    def test_centre_far_above_width(self, gamma):
        fit = GaussianFit(a=0.1, b=30.0, c=1.0)
        closed = generalized_fading_ber(fit, gamma)

        assert math.isfinite(closed)
        assert closed == pytest.approx(average_over_rayleigh(fit.evaluate, gamma), rel=1e-7)

    def test_rejects_non_positive_gamma(self, qpsk_published_fit):
        with pytest.raises(InvalidParameterError):
            generalized_fading_ber(qpsk_published_fit, 0.0)

    def test_curve(self, qpsk_published_fit):
        points = generalized_fading_curve(qpsk_published_fit, [1.0, 10.0])
        assert [p.gamma for p in points] == [1.0, 10.0]
        assert points[1].ber == generalized_fading_ber(qpsk_published_fit, 10.0)


class TestFadingPoint:
    """Test FadingPoint validation."""

    def test_valid(self):
        assert FadingPoint(gamma=1.0, ber=0.1).ber == 0.1

    @pytest.mark.parametrize("gamma,ber", [(0.0, 0.1), (1.0, 0.0), (1.0, 1.0)])
    def test_invalid(self, gamma, ber):
        with pytest.raises(InvalidParameterError):
            FadingPoint(gamma=gamma, ber=ber)


class TestExactFadingBer:
    """Test the exact per-scheme averages against numerical averaging."""

    def test_qpsk_reference(self, qpsk):
        assert exact_fading_ber(qpsk, 10.0) == pytest.approx(0.0232687, abs=1e-7)

    def test_qpsk_at_40_db(self, qpsk):
        assert exact_fading_ber(qpsk, 1e4) == pytest.approx(2.5e-5, abs=1e-8)

    @pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0, 100.0])
    def test_qpsk_matches_quadrature(self, qpsk, gamma):
        numeric = average_over_rayleigh(conditional_ber(qpsk), gamma)
        assert exact_fading_ber(qpsk, gamma) == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0, 100.0])
    def test_binary_ask_equals_qpsk(self, qpsk, bask, gamma):
        assert exact_fading_ber(bask, gamma) == pytest.approx(exact_fading_ber(qpsk, gamma),
                                                              rel=1e-14)

    @pytest.mark.parametrize("order", [4, 16, 64])
    @pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0, 100.0])
    def test_qam_matches_quadrature(self, order, gamma):
        scheme = ModulationScheme.qam(order)
        numeric = average_over_rayleigh(conditional_ber(scheme), gamma)
        assert exact_fading_ber(scheme, gamma) == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize("order", [4, 8])
    @pytest.mark.parametrize("gamma", [1.0, 10.0, 100.0])
    def test_ask_matches_quadrature(self, order, gamma):
        scheme = ModulationScheme.ask(order)
        numeric = average_over_rayleigh(conditional_ber(scheme), gamma)
        assert exact_fading_ber(scheme, gamma) == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize("order", [2, 4, 8])
    @pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0, 100.0])
    def test_fsk_is_twice_the_numerical_average(self, order, gamma):
        scheme = ModulationScheme.fsk(order)
        numeric = average_over_rayleigh(conditional_ber(scheme), gamma)
        assert exact_fading_ber(scheme, gamma) == pytest.approx(2.0 * numeric, rel=1e-6)

    def test_qam16_at_moderate_snr(self, qam16):
        const = scheme_constants(qam16)
        alpha, bg = const.alpha1, const.beta1 * 10.0
        k1 = (2.0 * alpha - alpha ** 2) / 4.0
        k2 = (4.0 * alpha ** 2 * math.atan(math.sqrt((bg + 2.0) / bg))
              - 2.0 * math.pi * alpha) / (4.0 * math.pi)
        value = exact_fading_ber(qam16, 10.0)

        assert k1 == 0.234375
        assert value == pytest.approx(k1 + k2 * math.sqrt(bg / (bg + 2.0)), rel=1e-14)
        assert value == pytest.approx(0.0901597, abs=1e-6)
        numeric = average_over_rayleigh(conditional_ber(qam16), 10.0)
        assert value == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize("label", ["QPSK", "16-QAM", "64-QAM", "BFSK", "8-FSK", "BASK",
                                       "4-ASK"])
    def test_strictly_decreasing(self, label):
        scheme = ModulationScheme.parse(label)
        values = [exact_fading_ber(scheme, g) for g in LOG_GRID]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_qpsk_high_snr_asymptote(self, qpsk):
        assert 1e6 * exact_fading_ber(qpsk, 1e6) == pytest.approx(0.25, abs=1e-4)

    def test_rejects_non_positive_gamma(self, qpsk):
        with pytest.raises(InvalidParameterError):
            exact_fading_ber(qpsk, -1.0)


class TestRayleighQAverages:
    """Test the closed forms of E[Q] and E[Q^2]."""

    @pytest.mark.parametrize("beta", [0.2, 1.0, 2.0])
    @pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0, 100.0])
    def test_q_average(self, beta, gamma):
        numeric = average_over_rayleigh(lambda xi: q_function(math.sqrt(beta * xi)), gamma)
        assert rayleigh_q_average(beta, gamma) == pytest.approx(numeric, rel=1e-8)

    @pytest.mark.parametrize("beta", [0.2, 1.0, 2.0])
    @pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0, 100.0])
    def test_q2_average(self, beta, gamma):
        numeric = average_over_rayleigh(lambda xi: q_function(math.sqrt(beta * xi)) ** 2, gamma)
        assert rayleigh_q2_average(beta, gamma) == pytest.approx(numeric, rel=1e-7)

    def test_q_average_reference_value(self):
        assert rayleigh_q_average(2.0, 1.0) == pytest.approx(0.1464466, abs=1e-7)

    def test_q_average_high_snr_asymptote(self):
        assert 1e6 * rayleigh_q_average(2.0, 1e6) == pytest.approx(0.25, abs=1e-4)

    def test_q2_average_low_snr_limit(self):
        assert rayleigh_q2_average(2.0, 1e-12) == pytest.approx(0.25, abs=1e-6)

    @pytest.mark.parametrize("beta", [0.2, 2.0])
    def test_q2_average_decreases_to_zero(self, beta):
        values = [rayleigh_q2_average(beta, g) for g in LOG_GRID]
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] < 1e-6

    def test_invalid_beta(self):
        with pytest.raises(InvalidParameterError):
            rayleigh_q_average(0.0, 1.0)


class TestAverageOverRayleigh:
    """Test the numerical fading average."""

    def test_constant_conditional_ber(self):
        assert average_over_rayleigh(lambda xi: 0.25, 7.0) == pytest.approx(0.25, rel=1e-12)

    def test_narrow_feature_at_large_gamma(self):
        fit = GaussianFit(a=0.1, b=0.0, c=0.5)
        gamma = 1e6
        numeric = average_over_rayleigh(fit.evaluate, gamma)
        assert numeric == pytest.approx(generalized_fading_ber(fit, gamma), rel=1e-8)

    def test_rejects_non_positive_gamma(self):
        with pytest.raises(InvalidParameterError):
            average_over_rayleigh(lambda xi: 0.1, 0.0)


class TestCompareCurves:
    """Test the side-by-side comparison rows."""

    GRID = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0]

    def test_qpsk_rows(self, qpsk, qpsk_published_fit):
        rows = compare_curves(qpsk, qpsk_published_fit, self.GRID)

        assert [r.ebn0_db for r in rows] == self.GRID
        row_40 = rows[4]
        assert isinstance(row_40, ComparisonRow)
        assert row_40.ber_exact == pytest.approx(2.5e-5, abs=1e-8)
        assert row_40.ratio == pytest.approx(0.708, abs=0.01)
        for row in rows:
            assert row.ber_quadrature == pytest.approx(row.ber_generalized, rel=1e-8)
            assert row.ratio == pytest.approx(row.ber_generalized / row.ber_exact)

    def test_curves_are_decreasing(self, qpsk, qpsk_published_fit):
        rows = compare_curves(qpsk, qpsk_published_fit, self.GRID)
        for column in ("ber_generalized", "ber_exact", "ber_quadrature"):
            values = [getattr(r, column) for r in rows]
            assert all(b < a for a, b in zip(values, values[1:]))

    def test_bfsk_ratio_above_30_db(self, bfsk):
        rows = compare_curves(bfsk, PUBLISHED_FITS["BFSK"], [30.0, 40.0, 50.0])
        for row in rows:
            assert row.ratio == pytest.approx(0.54, abs=0.01)

    @pytest.mark.parametrize("label", ["QPSK", "BFSK"])
    def test_high_snr_slope_is_one_decade_per_ten_db(self, label):
        scheme = ModulationScheme.parse(label)
        rows = compare_curves(scheme, PUBLISHED_FITS[label], [40.0, 50.0])
        for column in ("ber_generalized", "ber_exact"):
            upper, lower = (getattr(r, column) for r in rows)
            assert math.log10(upper / lower) == pytest.approx(1.0, rel=0.02)

    def test_parallel_rows_match_serial(self, qpsk, qpsk_published_fit):
        serial = compare_curves(qpsk, qpsk_published_fit, self.GRID, workers=1)
        parallel = compare_curves(qpsk, qpsk_published_fit, self.GRID, workers=4)
        assert serial == parallel

    def test_centre_far_above_width_gives_finite_ratio(self, qpsk):
        rows = compare_curves(qpsk, GaussianFit(a=0.1, b=30.0, c=1.0), [0.0, 30.0, 60.0])
        for row in rows:
            assert math.isfinite(row.ratio) and row.ratio > 0
            assert row.ber_generalized == pytest.approx(row.ber_quadrature, rel=1e-7)

    def test_quadrature_options_are_forwarded(self, qpsk, qpsk_published_fit, monkeypatch):
        calls = []

        def recording_average(ber_fn, gamma, **kwargs):
            calls.append(kwargs)
            return 0.01

        monkeypatch.setattr(fading, "average_over_rayleigh", recording_average)
        rows = compare_curves(qpsk, qpsk_published_fit, [10.0],
                              rel_tol=1e-6, abs_tol=1e-20, max_evaluations=2100)

        assert rows[0].ber_quadrature == 0.01
        assert calls == [{"rel_tol": 1e-6, "abs_tol": 1e-20, "max_evaluations": 2100}]

    def test_empty_grid(self, qpsk, qpsk_published_fit):
        with pytest.raises(InvalidParameterError):
            compare_curves(qpsk, qpsk_published_fit, [])

    def test_invalid_workers(self, qpsk, qpsk_published_fit):
        with pytest.raises(InvalidParameterError):
            compare_curves(qpsk, qpsk_published_fit, [0.0], workers=0)


class TestEvaluateMode:
    """Test single-estimator evaluation."""

    def test_modes(self, qpsk, qpsk_published_fit):
        assert evaluate_mode("exact", qpsk, None, 10.0) == exact_fading_ber(qpsk, 10.0)
        assert evaluate_mode("closed-form", qpsk, qpsk_published_fit, 10.0) == \
            generalized_fading_ber(qpsk_published_fit, 10.0)
        assert evaluate_mode("quadrature", qpsk, qpsk_published_fit, 10.0) == pytest.approx(
            generalized_fading_ber(qpsk_published_fit, 10.0), rel=1e-8)

    def test_quadrature_options_are_forwarded(self, qpsk, qpsk_published_fit, monkeypatch):
        calls = []

        def recording_average(ber_fn, gamma, **kwargs):
            calls.append(kwargs)
            return 0.02

        monkeypatch.setattr(fading, "average_over_rayleigh", recording_average)
        value = evaluate_mode("quadrature", qpsk, qpsk_published_fit, 10.0,
                              rel_tol=1e-4, max_evaluations=42)

        assert value == 0.02
        assert calls == [{"rel_tol": 1e-4, "abs_tol": 1e-300, "max_evaluations": 42}]

    def test_fit_required(self, qpsk):
        with pytest.raises(InvalidParameterError):
            evaluate_mode("closed-form", qpsk, None, 10.0)

    def test_unknown_mode(self, qpsk, qpsk_published_fit):
        with pytest.raises(InvalidParameterError):
            evaluate_mode("simulated", qpsk, qpsk_published_fit, 10.0)
