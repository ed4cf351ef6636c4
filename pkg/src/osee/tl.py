"""Thermodynamic-limit correlation matrices at the critical field.

At ``h = 1`` the infinite-chain mode propagator has the closed form
``U_mn(t) = J_{n-m}(4t)`` in terms of first-kind Bessel functions, so the
two-point matrix of a basis string with occupations ``occ(b)`` is

    Gamma_mn(t) = sum_b J_{b-m}(4t) J_{b-n}(4t) occ(b)

on the left window ``m, n in {-m_w+1, ..., 0}``.  Because ``J_k(x)`` dies
superexponentially past the turning point ``|k| ~ x``, every infinite sum here
is effectively finite: a window of ``ceil(4t)`` plus an Airy-scale pad holds
everything that has reached the cut, and semi-infinite occupation tails are
summed through the complement identity

    sum_{b<=0} J_{b-m} J_{b-n} = delta_mn - sum_{b>=1} J_{b-m} J_{b-n},

whose right-hand sum again truncates at ``b <= 4t + pad``.  The truncation
sizes live in :class:`TruncationPolicy`; the module refuses windows below the
policy minimum instead of silently dropping rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .bessel import BesselTable, bessel_row
from .entropy import CorrelationMatrix, entropy_from_correlation, entropy_from_spectrum
from .lattice import OccupationProfile, OperatorSpec, occupation_profile

__all__ = [
    "TruncationPolicy",
    "TruncationError",
    "correlation_matrix_tl",
    "gamma_prime_tl",
    "TLEngine",
    "BesselTable",
    "bessel_row",
]

#: Floor of the truncation pad: p(x) >= 10 * max(1, x^(1/3)) + 20.
_MIN_PAD_SCALE = 10.0
_MIN_PAD_OFFSET = 20.0


class TruncationError(ValueError):
    """A requested window or pad is too small to hold the light cone."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Sizes of the effectively-finite truncations.

    ``pad(x) = ceil(pad_scale * max(1, x**(1/3)) + pad_offset)`` orders are
    kept beyond the turning point ``|n| = x``; correlation windows have
    ``window_size(t) = ceil(4t) + pad(4t)`` rows.  The defaults are the
    minimum the module accepts -- ten Airy widths plus a constant floor, which
    keeps truncation error orders of magnitude below the 1e-8 comparisons made
    elsewhere.
    """

    pad_scale: float = _MIN_PAD_SCALE
    pad_offset: float = _MIN_PAD_OFFSET

    def __post_init__(self) -> None:
        if self.pad_scale < _MIN_PAD_SCALE or self.pad_offset < _MIN_PAD_OFFSET:
            raise TruncationError(
                f"pad policy ({self.pad_scale}, {self.pad_offset}) below the minimum "
                f"({_MIN_PAD_SCALE}, {_MIN_PAD_OFFSET})"
            )

    def pad(self, x: float) -> int:
        return int(math.ceil(self.pad_scale * max(1.0, x) ** (1.0 / 3.0) + self.pad_offset))

    def window_size(self, t: float) -> int:
        x = 4.0 * t
        return int(math.ceil(x)) + self.pad(x)

    def describe(self) -> dict[str, float]:
        return {"pad_scale": self.pad_scale, "pad_offset": self.pad_offset}


def _signed_contributions(
    occ: OccupationProfile, b_max: int
) -> list[tuple[float, np.ndarray]]:
    """Occupation as signed label sets: Gamma = [delta] + sum sign * outer-sums.

    For a finite pattern this is just the flip set with weight +1.  For a sea
    tail, ``occ(b) = [b<=0] XOR [b in flips]`` expands through the complement
    identity into ``delta_mn`` minus the *unoccupied* left-of-infinity part:
    weight -1 on ``{1..b_max} \\ flips`` (sea complement, minus re-occupied
    flips above the cut) and -1 on flips at ``b <= 0`` (holes in the sea).
    """
    flips = np.array(sorted(occ.flip_set), dtype=np.int64)
    if not occ.left_fill:
        return [(+1.0, flips)]
    positive = np.arange(1, b_max + 1, dtype=np.int64)
    negative_part = positive[~np.isin(positive, flips)]
    holes = flips[flips <= 0]
    out: list[tuple[float, np.ndarray]] = [(-1.0, negative_part)]
    if holes.size:
        out.append((-1.0, holes))
    high = flips[flips > b_max]
    if high.size:
        # Flips beyond the truncation horizon are genuinely occupied labels
        # that the complement sum never saw; add them back explicitly.
        out.append((+1.0, high))
    return out


def correlation_matrix_tl(
    occ: OccupationProfile,
    t: float,
    policy: TruncationPolicy | None = None,
    window_size: int | None = None,
) -> CorrelationMatrix:
    """Left-window two-point matrix of an occupation pattern at ``h = 1``.

    Parameters
    ----------
    occ : OccupationProfile
        Occupied staggered labels (finite set or sea tail with flips).
    t : float
        Evolution time; the Bessel argument is ``x = 4t``.
    policy : TruncationPolicy, optional
        Pad/window sizes; defaults to the minimum policy.
    window_size : int, optional
        Explicit window row count ``m_w`` (labels ``{-m_w+1, ..., 0}``).
        Values below the policy minimum raise :class:`TruncationError`.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    policy = policy or TruncationPolicy()
    minimum = TruncationPolicy().window_size(t)
    m_w = policy.window_size(t) if window_size is None else int(window_size)
    if m_w < minimum:
        raise TruncationError(
            f"window of {m_w} rows cannot hold the light cone at t={t} "
            f"(minimum {minimum}); refusing to truncate rank"
        )
    x = 4.0 * t
    window = np.arange(-m_w + 1, 1, dtype=np.int64)
    b_max = int(math.ceil(x)) + policy.pad(x)
    gamma = np.eye(m_w) if occ.left_fill else np.zeros((m_w, m_w))
    contributions = _signed_contributions(occ, b_max)
    all_labels = np.concatenate([bs for _, bs in contributions if bs.size] or [np.array([], np.int64)])
    if all_labels.size:
        table = bessel_row(x, int(all_labels.min()), int(all_labels.max() + m_w - 1))
        for sign, bs in contributions:
            if not bs.size:
                continue
            v = table.take(bs[:, None] - window[None, :])
            gamma += sign * (v.T @ v)
    gamma = (gamma + gamma.T) / 2.0
    return CorrelationMatrix(float(t), gamma, window)


def gamma_prime_tl(
    t: float, size: int, policy: TruncationPolicy | None = None
) -> CorrelationMatrix:
    """Reflected sea correlation matrix ``Gamma'_mn = Gamma_{-m,-n}``.

    Re-indexing the evolved sea tail by ``m -> -m`` gives a matrix over
    nonnegative labels ``m, n in {0, ..., size-1}`` which equals
    ``sum_{b>=0} (-1)^(m+n) J_{b-m} J_{b-n}``; it is the square of the
    block-Toeplitz kernel handled by the spectral module and serves as its
    cross-check.
    """
    sea = OccupationProfile(1, frozenset())
    g = correlation_matrix_tl(sea, t, policy, window_size=size)
    return CorrelationMatrix(float(t), g.matrix[::-1, ::-1].copy(), np.arange(size))


@dataclass
class TLEngine:
    """Entropy-series backend in the thermodynamic limit (``h = 1`` only).

    Finite strings use the occupied-side Gram matrix (size = number of
    occupied labels) instead of the full window; sea tails diagonalize the
    window matrix.
    """

    policy: TruncationPolicy | None = None
    name: str = "tl"

    def __post_init__(self) -> None:
        self.policy = self.policy or TruncationPolicy()

    def provenance(self) -> dict[str, Any]:
        return {"mode": "tl", "h": 1.0, **self.policy.describe()}

    def entropies(self, spec: OperatorSpec, times: np.ndarray) -> np.ndarray:
        occ = occupation_profile(spec)
        out = np.empty(len(times))
        for i, t in enumerate(times):
            out[i] = self._entropy_at(occ, float(t))
        return out

    def _entropy_at(self, occ: OccupationProfile, t: float) -> float:
        if occ.left_fill == 0:
            flips = np.array(sorted(occ.flip_set), dtype=np.int64)
            if flips.size == 0:
                return 0.0
            # Gram matrix of the window restrictions of the occupied modes:
            # same nonzero spectrum as the full window Gamma, at K x K cost.
            m_w = self.policy.window_size(t)
            window = np.arange(-m_w + 1, 1, dtype=np.int64)
            x = 4.0 * t
            table = bessel_row(x, int(flips.min()), int(flips.max() + m_w - 1))
            v = table.take(flips[:, None] - window[None, :])
            gram = v @ v.T
            return entropy_from_spectrum(np.linalg.eigvalsh((gram + gram.T) / 2.0))
        return entropy_from_correlation(correlation_matrix_tl(occ, t, self.policy))
