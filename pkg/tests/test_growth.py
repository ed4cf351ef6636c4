"""Logarithmic growth fits."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osee.entropy import EntropySeries
from osee.growth import MIN_SAMPLES, fit_log_growth, fit_series


def test_exact_logarithm_is_recovered():
    times = np.linspace(5.0, 60.0, 40)
    fit = fit_log_growth(times, np.log(times) / 3.0 + 0.25)
    assert fit.slope == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert fit.intercept == pytest.approx(0.25, abs=1e-12)
    assert fit.rms_residual < 1e-13
    assert fit.sample_count == 40
    assert fit.window == (5.0, 60.0)


@settings(max_examples=30, deadline=None)
@given(slope=st.floats(-2.0, 2.0), intercept=st.floats(-5.0, 5.0))
def test_any_exact_line_in_log_time_is_recovered(slope, intercept):
    times = np.linspace(6.0, 50.0, 25)
    fit = fit_log_growth(times, slope * np.log(times) + intercept)
    assert fit.slope == pytest.approx(slope, abs=1e-9)
    assert fit.intercept == pytest.approx(intercept, abs=1e-9)


def test_samples_outside_the_window_are_ignored():
    inside = np.linspace(5.0, 60.0, 30)
    outside = np.array([0.5, 1.0, 2.0, 80.0, 120.0])
    times = np.concatenate([outside, inside])
    values = np.log(times) / 6.0
    values[:5] = -40.0  # garbage that must not touch the fit
    fit = fit_log_growth(times, values)
    assert fit.slope == pytest.approx(1.0 / 6.0, abs=1e-12)
    assert fit.sample_count == 30


def test_window_bounds_are_inclusive():
    times = np.array([4.9, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 55.0, 60.0, 60.1])
    fit = fit_log_growth(times, np.log(times))
    assert fit.sample_count == 8


def test_noisy_series_reports_its_residual():
    rng = np.random.default_rng(3)
    times = np.linspace(5.0, 60.0, 200)
    noise = rng.normal(scale=0.01, size=times.size)
    fit = fit_log_growth(times, np.log(times) / 3.0 + noise)
    assert fit.slope == pytest.approx(1.0 / 3.0, abs=0.01)
    assert 0.003 < fit.rms_residual < 0.03


def test_evaluate_reproduces_the_fitted_line():
    times = np.linspace(5.0, 60.0, 20)
    fit = fit_log_growth(times, 0.5 * np.log(times) - 1.0)
    assert fit.evaluate(10.0) == pytest.approx(0.5 * math.log(10.0) - 1.0, abs=1e-10)


def test_describe_lists_the_fit_parameters():
    fit = fit_log_growth(np.linspace(5, 60, 12), np.log(np.linspace(5, 60, 12)))
    info = fit.describe()
    assert set(info) >= {"slope", "intercept", "rms_residual", "sample_count"}


def test_too_few_samples_in_window_is_an_error():
    times = np.linspace(5.0, 60.0, MIN_SAMPLES - 1)
    with pytest.raises(ValueError):
        fit_log_growth(times, np.log(times))


def test_invalid_windows_are_refused():
    times = np.linspace(5.0, 60.0, 20)
    values = np.log(times)
    with pytest.raises(ValueError):
        fit_log_growth(times, values, window=(60.0, 5.0))
    with pytest.raises(ValueError):
        fit_log_growth(times, values, window=(0.0, 60.0))


def test_mismatched_arrays_are_refused():
    with pytest.raises(ValueError):
        fit_log_growth(np.linspace(5, 60, 10), np.zeros(9))


def test_series_wrapper_uses_the_series_grid():
    times = np.linspace(5.0, 60.0, 30)
    series = EntropySeries(times, np.log(times) / 3.0, {"engine": "synthetic"})
    fit = fit_series(series, window=(5.0, 60.0))
    assert fit.slope == pytest.approx(1.0 / 3.0, abs=1e-12)
