"""Logarithmic-growth fits for entropy series.

Sea-string entropies grow as ``S(t) = c ln t + c'`` once transients die out;
the prefactor distinguishes the critical chain (c = 1/6) from the gapped one
(c = 1/3).  The fit is ordinary least squares of ``S`` against ``ln t``
restricted to a time window, with the residual scale reported so callers can
judge whether the window was actually in the asymptotic regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import EntropySeries

__all__ = ["MIN_SAMPLES", "LogFit", "fit_log_growth", "fit_series"]

#: Fewer points than this cannot support a two-parameter fit worth reporting.
MIN_SAMPLES = 8


@dataclass(frozen=True)
class LogFit:
    """Result of fitting ``S = slope * ln t + intercept`` over ``window``."""

    slope: float
    intercept: float
    rms_residual: float
    sample_count: int
    window: tuple[float, float]

    def evaluate(self, t: float) -> float:
        """The fitted law at time ``t``."""
        if t <= 0.0:
            raise ValueError("fitted law is defined for t > 0 only")
        return self.slope * math.log(t) + self.intercept

    def describe(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "rms_residual": self.rms_residual,
            "sample_count": self.sample_count,
            "window": list(self.window),
        }


def fit_log_growth(times, entropies, window: tuple[float, float] = (5.0, 60.0)) -> LogFit:
    """Least-squares ``S`` vs ``ln t`` over ``window`` (inclusive on both ends).

    Raises ``ValueError`` when the window is malformed or holds fewer than
    :data:`MIN_SAMPLES` points -- a fit through a handful of samples would
    happily report a slope for a curve that is nothing like a logarithm.
    """
    lo, hi = float(window[0]), float(window[1])
    if not 0.0 < lo < hi:
        raise ValueError(f"fit window must satisfy 0 < lo < hi, got ({lo}, {hi})")
    times = np.asarray(times, dtype=float)
    entropies = np.asarray(entropies, dtype=float)
    if times.shape != entropies.shape or times.ndim != 1:
        raise ValueError("times and entropies must be matching 1-d arrays")
    mask = (times >= lo) & (times <= hi)
    count = int(mask.sum())
    if count < MIN_SAMPLES:
        raise ValueError(
            f"only {count} samples inside window [{lo}, {hi}]; need at least {MIN_SAMPLES}"
        )
    x = np.log(times[mask])
    y = entropies[mask]
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(residuals**2)))
    return LogFit(float(slope), float(intercept), rms, count, (lo, hi))


def fit_series(series: EntropySeries, window: tuple[float, float] = (5.0, 60.0)) -> LogFit:
    """Convenience wrapper fitting a stored series."""
    return fit_log_growth(series.times, series.entropies, window)
