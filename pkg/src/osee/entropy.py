"""Correlation spectra to operator-space entanglement entropy.

A normalized basis string evolves into a Gaussian (free-fermion) state of the
adjoint mode algebra, so the reduced operator density matrix over the left
half-lattice is fixed by the two-point matrix ``Gamma_mn(t)`` restricted to
the left index window.  Its eigenvalues ``gamma_j`` are mode occupation
probabilities, and the entropy is the sum of binary entropies

    S(t) = sum_j e(gamma_j),    e(x) = -x ln x - (1 - x) ln(1 - x),

in natural-log units.  This module holds the spectrum-to-entropy conversion,
the time-series orchestration over pluggable engines, and the series
serialization shared with the command line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Protocol

import numpy as np

from .lattice import OperatorSpec, format_operator_spec

__all__ = [
    "SpectralDomainError",
    "CorrelationMatrix",
    "binary_entropy",
    "entropy_from_spectrum",
    "entropy_from_correlation",
    "EntropySeries",
    "SeriesEngine",
    "entropy_series",
    "series_to_csv",
    "series_from_csv",
    "series_to_json_dict",
    "series_from_json_dict",
]

#: Inputs may stray this far outside [0, 1] before being treated as a bug.
DOMAIN_TOLERANCE = 1e-6
#: Round-off band accepted by binary_entropy without complaint.
CLAMP_TOLERANCE = 1e-9
#: Maximum allowed asymmetry of a correlation matrix.
SYMMETRY_TOLERANCE = 1e-10


class SpectralDomainError(ArithmeticError):
    """An occupation eigenvalue lies outside [0, 1] by more than round-off.

    This signals a defective correlation matrix upstream (assembly or
    truncation bug), not a condition the entropy kernel should paper over.
    """


@dataclass(frozen=True)
class CorrelationMatrix:
    """Two-point matrix ``Gamma_mn = <w_m^+(t) w_n(t)>`` on an index window.

    Attributes
    ----------
    time : float
        Evolution time the matrix belongs to.
    matrix : numpy.ndarray
        Real symmetric matrix; eigenvalues lie in [0, 1] up to round-off.
    labels : numpy.ndarray
        Staggered Majorana labels indexing the rows/columns.
    """

    time: float
    matrix: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("correlation matrix must be square")
        if m.shape[0] != np.asarray(self.labels).size:
            raise ValueError("label count does not match matrix dimension")


def binary_entropy(x: float) -> float:
    """Binary entropy ``e(x) = -x ln x - (1-x) ln(1-x)`` with ``0 ln 0 = 0``.

    Accepts arguments within ``1e-9`` of [0, 1] (round-off from eigensolvers)
    and clamps them; anything further out raises :class:`SpectralDomainError`.
    Maximum value ``ln 2`` at ``x = 1/2``.
    """
    if not -CLAMP_TOLERANCE <= x <= 1.0 + CLAMP_TOLERANCE:
        raise SpectralDomainError(f"occupation {x!r} outside [0, 1] beyond tolerance")
    x = min(max(x, 0.0), 1.0)
    return _binary_entropy_clamped(np.array([x])).item()


def _binary_entropy_clamped(xs: np.ndarray) -> np.ndarray:
    """Vectorized e(x) for arrays already clamped into [0, 1]."""
    out = np.zeros_like(xs)
    interior = (xs > 0.0) & (xs < 1.0)
    x = xs[interior]
    out[interior] = -x * np.log(x) - (1.0 - x) * np.log1p(-x)
    return out


def _spectrum(gamma: CorrelationMatrix | np.ndarray) -> np.ndarray:
    m = gamma.matrix if isinstance(gamma, CorrelationMatrix) else np.asarray(gamma)
    asym = np.abs(m - m.T).max() if m.size else 0.0
    if asym > SYMMETRY_TOLERANCE:
        raise ValueError(f"correlation matrix asymmetric by {asym:.3e}")
    return np.linalg.eigvalsh(m)


def entropy_from_spectrum(occupations: np.ndarray) -> float:
    """Entropy ``sum_j e(gamma_j)`` of an occupation spectrum.

    Values must lie in ``[-1e-6, 1+1e-6]``; within that band they are clamped
    to [0, 1] (pure round-off), outside it the producing matrix is considered
    defective and :class:`SpectralDomainError` is raised.
    """
    ev = np.asarray(occupations, dtype=float)
    if ev.size == 0:
        return 0.0
    if ev.min() < -DOMAIN_TOLERANCE or ev.max() > 1.0 + DOMAIN_TOLERANCE:
        raise SpectralDomainError(
            f"occupation spectrum outside [0, 1]: min {ev.min():.3e}, max {ev.max():.3e}"
        )
    return float(_binary_entropy_clamped(np.clip(ev, 0.0, 1.0)).sum())


def entropy_from_correlation(gamma: CorrelationMatrix | np.ndarray) -> float:
    """Entropy ``sum_j e(gamma_j)`` over the eigenvalues of a correlation matrix."""
    return entropy_from_spectrum(_spectrum(gamma))


@dataclass(frozen=True)
class EntropySeries:
    """Sampled ``(t, S)`` pairs plus provenance, the unit of reporting.

    Attributes
    ----------
    times : numpy.ndarray
        Strictly increasing, nonnegative sample times.
    entropies : numpy.ndarray
        Entropy in nats at each sample.
    provenance : dict
        Engine name, operator string, and engine configuration -- everything
        needed to reproduce the series.
    """

    times: np.ndarray
    entropies: np.ndarray
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.entropies, dtype=float)
        if t.shape != s.shape or t.ndim != 1:
            raise ValueError("times and entropies must be 1-d arrays of equal length")
        if t.size and (np.diff(t) <= 0).any():
            raise ValueError("times must be strictly increasing")
        if s.size and s.min() < -1e-12:
            raise ValueError(f"negative entropy {s.min():.3e} in series")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "entropies", s)


class SeriesEngine(Protocol):
    """Anything that can evaluate S(t) for an operator spec on a time grid."""

    name: str

    def entropies(self, spec: OperatorSpec, times: np.ndarray) -> np.ndarray: ...

    def provenance(self) -> dict[str, Any]: ...


def entropy_series(
    spec: OperatorSpec, engine: SeriesEngine, times: Iterable[float]
) -> EntropySeries:
    """Evaluate the entropy of an evolving basis string on a time grid.

    Parameters
    ----------
    spec : OperatorSpec
        Initial basis string.
    engine : SeriesEngine
        Finite-chain or thermodynamic-limit evaluation backend.
    times : array_like
        Strictly increasing, nonnegative sample times.
    """
    t = np.asarray(list(times) if not isinstance(times, np.ndarray) else times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("times must be a nonempty 1-d array")
    if t[0] < 0.0 or (np.diff(t) <= 0).any():
        raise ValueError("times must be nonnegative and strictly increasing")
    s = np.asarray(engine.entropies(spec, t), dtype=float)
    provenance = {
        "engine": engine.name,
        "operator": format_operator_spec(spec),
        **engine.provenance(),
    }
    return EntropySeries(t, s, provenance)


# ---------------------------------------------------------------------------
# Serialization (the on-disk formats of the command line)
# ---------------------------------------------------------------------------

def series_to_csv(series: EntropySeries) -> str:
    """Render a series as CSV: a ``# config:`` comment, a header, ``t,S`` rows.

    Floats are written with ``repr`` (shortest round-trip form), so identical
    series produce byte-identical output.
    """
    cfg = json.dumps(series.provenance, sort_keys=True)
    lines = [f"# config: {cfg}", "t,S"]
    for t, s in zip(series.times, series.entropies):
        lines.append(f"{float(t)!r},{float(s)!r}")
    return "\n".join(lines) + "\n"


def series_from_csv(text: str) -> EntropySeries:
    """Parse the CSV form produced by :func:`series_to_csv`."""
    provenance: dict[str, Any] = {}
    times: list[float] = []
    entropies: list[float] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment = line.lstrip("#").strip()
            if comment.startswith("config:"):
                provenance = json.loads(comment[len("config:"):].strip())
            continue
        if line.lower() in ("t,s",):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed series row {raw!r}")
        times.append(float(parts[0]))
        entropies.append(float(parts[1]))
    return EntropySeries(np.array(times), np.array(entropies), provenance)


def series_to_json_dict(series: EntropySeries) -> dict[str, Any]:
    return {
        "format": "entropy-series",
        "config": series.provenance,
        "times": [float(t) for t in series.times],
        "entropies": [float(s) for s in series.entropies],
    }


def series_from_json_dict(payload: dict[str, Any]) -> EntropySeries:
    if payload.get("format") not in (None, "entropy-series"):
        raise ValueError(f"not an entropy series payload: format={payload.get('format')!r}")
    return EntropySeries(
        np.asarray(payload["times"], dtype=float),
        np.asarray(payload["entropies"], dtype=float),
        dict(payload.get("config", {})),
    )
