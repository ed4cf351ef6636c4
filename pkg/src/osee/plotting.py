"""Headless figure rendering for the command-line report path.

Figures are drawn straight onto ``matplotlib.figure.Figure`` objects (no
pyplot, no global state, no display), so rendering works in batch jobs and
containers and never perturbs byte-determinism of the data files it sits
next to.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .entropy import EntropySeries
from .growth import LogFit
from .toeplitz import EigenCensus, PsiMatrix

__all__ = ["plot_series", "plot_spectrum"]

_DPI = 150


def _label_from(provenance: dict) -> str:
    op = provenance.get("operator", "?")
    mode = provenance.get("mode", provenance.get("engine", ""))
    h = provenance.get("h")
    bits = [f"op {op}"]
    if mode:
        bits.append(str(mode))
    if h is not None:
        bits.append(f"h={h}")
    return ", ".join(bits)


def plot_series(series: EntropySeries, path: str | Path, fit: LogFit | None = None) -> Path:
    """Render ``S(t)`` to ``path``; overlay the fitted logarithm when given.

    A fit switches the time axis to log scale (the regime where the law is a
    straight line); otherwise the axis stays linear, which suits saturating
    curves.
    """
    path = Path(path)
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.subplots()
    ax.plot(series.times, series.entropies, lw=1.2, label=_label_from(series.provenance))
    if fit is not None:
        lo, hi = fit.window
        ts = np.geomspace(max(lo, 1e-9), hi, 200)
        ax.plot(ts, fit.slope * np.log(ts) + fit.intercept, "--", lw=1.0,
                label=f"{fit.slope:.4f} ln t + {fit.intercept:.4f}")
        ax.set_xscale("log")
        positive = series.times > 0
        if positive.any():
            ax.set_xlim(series.times[positive].min(), series.times.max())
    ax.set_xlabel("t")
    ax.set_ylabel("S(t)")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    return path


def plot_spectrum(psi: PsiMatrix, path: str | Path, census: EigenCensus | None = None) -> Path:
    """Render the sorted eigenvalues of a truncated block-Toeplitz kernel."""
    path = Path(path)
    lam = np.sort(np.linalg.eigvalsh(psi.matrix))
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.subplots()
    ax.plot(np.arange(lam.size), lam, ".", ms=3)
    for guide in (-1.0, 0.0, 1.0):
        ax.axhline(guide, color="grey", lw=0.6, alpha=0.6)
    ax.set_xlabel("eigenvalue index")
    ax.set_ylabel("$\\lambda$")
    ax.set_title(f"kernel spectrum, t={psi.time:g}, dim={psi.dimension}")
    if census is not None:
        text = (f"$\\epsilon$={census.epsilon:g}\n"
                f"near -1: {census.near_minus}\nnear 0: {census.near_zero}\n"
                f"near +1: {census.near_plus}\noutside: {census.outside}")
        ax.text(0.02, 0.97, text, transform=ax.transAxes, va="top", fontsize=8,
                bbox={"boxstyle": "round", "facecolor": "white", "alpha": 0.8})
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    return path
