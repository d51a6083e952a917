"""Signal extraction on synthetic series with known answers."""

import math

import numpy as np
import pytest

from spinladder.errors import InsufficientDataError, InvalidArgumentError
from spinladder.lattice import LadderParams
from spinladder.signals import (
    ENVELOPE_PROMINENCE,
    TimeSeries,
    dominant_frequency,
    effective_coupling_from_period,
    envelope_period,
    extract_alpha,
    find_peaks,
    loglog_fit,
)


def series(fn, t_end, n):
    t = np.linspace(0.0, t_end, n)
    return TimeSeries(t, fn(t))


# ------------------------------------------------------------------ TimeSeries

def test_time_series_properties():
    ts = series(np.sin, 10.0, 101)
    assert ts.dt == pytest.approx(0.1)
    assert ts.duration == pytest.approx(10.0)


def test_time_series_validation():
    with pytest.raises(InvalidArgumentError):
        TimeSeries([0.0], [1.0])
    with pytest.raises(InvalidArgumentError):
        TimeSeries([0.0, 1.0, 0.5], [1.0, 2.0, 3.0])
    with pytest.raises(InvalidArgumentError):
        TimeSeries([0.0, 1.0, 3.0], [1.0, 2.0, 3.0])  # non-uniform
    with pytest.raises(InvalidArgumentError):
        TimeSeries([0.0, 1.0], [1.0, 2.0, 3.0])


# ------------------------------------------------------------------ find_peaks

def test_find_peaks_single_sine_max():
    ts = series(np.sin, 2.0 * math.pi, 1000)
    peaks = find_peaks(ts, 0.1)
    assert len(peaks) == 1
    t_peak, v_peak = peaks[0]
    assert t_peak == pytest.approx(math.pi / 2.0, abs=ts.dt)
    assert v_peak == pytest.approx(1.0, abs=1e-4)


def test_find_peaks_counts_oscillations():
    ts = series(lambda t: np.sin(3.0 * t), 40.0, 4000)
    peaks = find_peaks(ts, 0.1)
    # 40 / (2 pi / 3) = 19.1 full periods
    assert len(peaks) == 19


def test_find_peaks_empty_on_monotone():
    ts = series(lambda t: t, 1.0, 50)
    assert find_peaks(ts, 0.1) == []


def test_find_peaks_needs_three_samples():
    with pytest.raises(InsufficientDataError):
        find_peaks(TimeSeries([0.0, 1.0], [0.0, 1.0]), 0.1)


# ---------------------------------------------------------- dominant_frequency

def test_dominant_frequency_pure_cosine():
    ts = series(lambda t: np.cos(3.0 * t), 40.0, 8000)
    assert dominant_frequency(ts) == pytest.approx(3.0, rel=1e-3)


def test_dominant_frequency_scale_offset_invariant():
    t = np.linspace(0.0, 40.0, 8000)
    base = dominant_frequency(TimeSeries(t, np.cos(3.0 * t)))
    moved = dominant_frequency(TimeSeries(t, 5.0 * np.cos(3.0 * t) + 2.0))
    assert moved == pytest.approx(base, abs=1e-9)


def test_dominant_frequency_constant_rejected():
    ts = series(lambda t: np.ones_like(t), 10.0, 500)
    with pytest.raises(InsufficientDataError):
        dominant_frequency(ts)


def test_dominant_frequency_needs_enough_periods():
    # ~4.8 periods of omega = 3 in [0, 10]: below the 10-period floor
    ts = series(lambda t: np.cos(3.0 * t), 10.0, 2000)
    with pytest.raises(InsufficientDataError):
        dominant_frequency(ts)


# ------------------------------------------------------------- envelope_period

def test_envelope_period_synthetic_beat():
    # carrier sin^2(3t) under envelope sin^2(0.01 t): first envelope maximum
    # at t* = 50 pi, so the extracted period is 100 pi
    ts = series(lambda t: np.sin(0.01 * t) ** 2 * np.sin(3.0 * t) ** 2, 400.0, 8000)
    assert envelope_period(ts) == pytest.approx(100.0 * math.pi, rel=0.02)


def test_envelope_period_flat_envelope_rejected():
    ts = series(lambda t: np.sin(3.0 * t), 40.0, 4000)
    with pytest.raises(InsufficientDataError):
        envelope_period(ts)


def test_envelope_period_too_few_carrier_peaks():
    ts = series(lambda t: np.sin(3.0 * t), 6.0, 600)
    with pytest.raises(InsufficientDataError):
        envelope_period(ts)


def test_envelope_prominence_default():
    assert ENVELOPE_PROMINENCE == 0.05


# ------------------------------------------------------------------ loglog_fit

def test_loglog_fit_linear_law():
    x = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    fit = loglog_fit(x, 5.0 * x)
    assert fit.slope == pytest.approx(1.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(5.0), abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.alpha is None


def test_loglog_fit_quadratic_law():
    x = np.array([1.0, 3.0, 9.0, 27.0])
    fit = loglog_fit(x, x ** 2)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)


def test_loglog_fit_scale_invariant_slope(rng):
    x = np.array([1.0, 2.0, 4.0, 8.0])
    y = x ** 1.3 * np.exp(rng.normal(scale=0.05, size=4))
    a = loglog_fit(x, y)
    b = loglog_fit(x, 10.0 * y)
    assert b.slope == pytest.approx(a.slope, abs=1e-12)
    assert b.r_squared == pytest.approx(a.r_squared, abs=1e-12)


def test_loglog_fit_validation():
    with pytest.raises(InvalidArgumentError):
        loglog_fit([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(InvalidArgumentError):
        loglog_fit([1.0, -2.0, 3.0], [1.0, 2.0, 3.0])
    with pytest.raises(InvalidArgumentError):
        loglog_fit([1.0, 2.0, 3.0], [1.0, 0.0, 3.0])
    with pytest.raises(InvalidArgumentError):
        loglog_fit([1.0, 2.0, 3.0], [1.0, 2.0])


# --------------------------------------------------- period-coupling mapping

def test_effective_coupling_reference_anisotropy():
    # at g = 1, d = 1/2 the dressing weight is 1/sqrt(2) and J_eff = pi / T
    params = LadderParams()
    assert effective_coupling_from_period(100.0, params) == pytest.approx(
        math.pi / 100.0, rel=1e-12)


def test_effective_coupling_general_anisotropy():
    params = LadderParams(g=0.0, d=0.5)
    # weight = 1 when the bond is purely Ising-dressed
    expected = math.pi / (100.0 * math.sqrt(2.0))
    assert effective_coupling_from_period(100.0, params) == pytest.approx(expected, rel=1e-12)


def test_effective_coupling_rejects_d_zero():
    with pytest.raises(InvalidArgumentError):
        effective_coupling_from_period(100.0, LadderParams(d=0.0))
    with pytest.raises(InvalidArgumentError):
        effective_coupling_from_period(-1.0, LadderParams())


def test_extract_alpha_planted_round_trip():
    # plant J_eff = 0.02 at h = 100, J = 1: T = pi / J_eff and alpha = 2
    params = LadderParams(h=100.0)
    t_slow = math.pi / 0.02
    assert extract_alpha(t_slow, params) == pytest.approx(2.0, abs=1e-9)


def test_extract_alpha_validation():
    with pytest.raises(InvalidArgumentError):
        extract_alpha(100.0, LadderParams(h=0.0, field_mask=frozenset()))
    with pytest.raises(InvalidArgumentError):
        extract_alpha(100.0, LadderParams(j_perp=1.0, j_parallel=0.9))
