"""Closed-form saturation machinery for finite strings at the critical field.

A string of ``K`` Majorana labels ``j_1 < ... < j_K`` evolves into a rank-K
correlation matrix: ``Gamma(t) = sum_a |psi_a><psi_a|`` where ``psi_a`` is the
left-window restriction of the mode that started on label ``j_a``.  Its K
(generically) nonzero eigenvalues therefore equal the eigenvalues of the K x K
Gram matrix of overlaps

    g_ab = <psi_a | psi_b> = sum_{k<=0} J_{k-j_a}(4t) J_{k-j_b}(4t),

which this module evaluates through the complement identity (the ``k >= 1``
sum truncates at the light cone) or, at ``t = inf``, through the stationary
limit

    <psi_a|psi_b> -> (1/2) delta_ab - sin[pi (j_a - j_b) / 2] / [pi (j_a - j_b)].

The entropy saturates at ``sum_a e(gamma_a)``: ``ln 2`` for a single label,
``e(1/2 + 1/pi) + e(1/2 - 1/pi) = 0.94793`` for two adjacent labels, and so
on.  The Gram eigenvalues are used directly; an explicit orthonormalization
route (Cholesky factor ``g = R^T R``, spectrum of ``R R^T``) is kept as an
independently-assembled cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bessel import bessel_row
from .entropy import entropy_from_spectrum
from .lattice import OperatorSemanticsError
from .tl import TruncationPolicy

__all__ = [
    "OverlapMatrix",
    "psi_overlap",
    "overlap_matrix",
    "saturation_spectrum",
    "saturation_entropy",
    "gram_schmidt_spectrum",
    "two_label_spectrum",
]

#: Gram eigenvalues below this are treated as exact rank deficiency.
RANK_THRESHOLD = 1e-8


@dataclass(frozen=True)
class OverlapMatrix:
    """Symmetric K x K Gram matrix of left-window mode overlaps."""

    labels: tuple[int, ...]
    time: float  # math.inf marks the stationary limit
    matrix: np.ndarray


def _stationary_overlap(alpha: int, beta: int) -> float:
    if alpha == beta:
        return 0.5
    d = alpha - beta
    return -math.sin(math.pi * d / 2.0) / (math.pi * d)


def psi_overlap(alpha: int, beta: int, t: float) -> float:
    """Overlap ``<psi_alpha | psi_beta>`` of two left-window mode restrictions.

    Parameters
    ----------
    alpha, beta : int
        Staggered labels the modes started on.
    t : float
        Time; ``math.inf`` returns the stationary closed form.  Finite times
        cost one Bessel row of ~``4t`` orders (arguments up to ~1e5 are fine).
    """
    if math.isinf(t):
        return _stationary_overlap(alpha, beta)
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    x = 4.0 * t
    policy = TruncationPolicy()
    k_max = int(math.ceil(x)) + policy.pad(x)
    ks = np.arange(1, k_max + 1)
    table = bessel_row(x, int(1 - max(alpha, beta)), int(k_max - min(alpha, beta)))
    right_sum = float(np.dot(table.take(ks - alpha), table.take(ks - beta)))
    return (1.0 if alpha == beta else 0.0) - right_sum


def overlap_matrix(labels: Sequence[int], t: float) -> OverlapMatrix:
    """Gram matrix of the modes started on ``labels`` (distinct integers)."""
    labels = tuple(int(b) for b in labels)
    if len(set(labels)) != len(labels):
        raise OperatorSemanticsError(f"duplicate labels in {labels}")
    k = len(labels)
    if math.isinf(t):
        g = np.array(
            [[_stationary_overlap(a, b) for b in labels] for a in labels]
        ).reshape(k, k)
        return OverlapMatrix(labels, t, g)
    if k == 0:
        return OverlapMatrix(labels, float(t), np.zeros((0, 0)))
    x = 4.0 * t
    policy = TruncationPolicy()
    k_max = int(math.ceil(x)) + policy.pad(x)
    ks = np.arange(1, k_max + 1)
    arr = np.array(labels)
    table = bessel_row(x, int(1 - arr.max()), int(k_max - arr.min()))
    v = table.take(ks[None, :] - arr[:, None])
    g = np.eye(k) - v @ v.T
    g = (g + g.T) / 2.0
    return OverlapMatrix(labels, float(t), g)


def saturation_spectrum(labels: Sequence[int], t: float) -> np.ndarray:
    """The K (possibly zero) occupation eigenvalues of a K-label string.

    Equal to the eigenvalues of the overlap Gram matrix; returned descending.
    Eigenvalues below :data:`RANK_THRESHOLD` are kept as exact zeros
    (rank-deficient overlap sets, e.g. at ``t = 0``).
    """
    g = overlap_matrix(labels, t)
    if g.matrix.size == 0:
        return np.zeros(0)
    ev = np.linalg.eigvalsh(g.matrix)[::-1].copy()
    ev[np.abs(ev) < RANK_THRESHOLD] = 0.0
    return ev


def saturation_entropy(labels: Sequence[int], t: float) -> float:
    """Entropy ``sum_a e(gamma_a)`` of the saturation spectrum."""
    return entropy_from_spectrum(saturation_spectrum(labels, t))


def gram_schmidt_spectrum(labels: Sequence[int], t: float) -> np.ndarray:
    """Occupation spectrum through explicit orthonormalization (cross-check).

    Writing the non-orthogonal mode set as ``psi = phi R`` with orthonormal
    ``phi`` and the Cholesky factor ``g = R^T R``, the correlation matrix in
    the ``phi`` basis is ``R R^T``; its eigenvalues must match
    :func:`saturation_spectrum` whenever the set is numerically full-rank
    (smallest Gram eigenvalue above :data:`RANK_THRESHOLD`).
    """
    g = overlap_matrix(labels, t)
    if g.matrix.size == 0:
        return np.zeros(0)
    lower = np.linalg.cholesky(g.matrix)
    return np.linalg.eigvalsh(lower.T @ lower)[::-1].copy()


def two_label_spectrum(g: np.ndarray) -> tuple[float, float]:
    """Closed-form eigenvalues of a 2 x 2 overlap matrix.

    ``gamma_{1,2} = (g11 + g22)/2 +- sqrt((g11 - g22)^2 + 4 g12^2)/2`` -- the
    standard symmetric 2x2 eigenvalue formula, consistent with the trace
    ``gamma_1 + gamma_2 = g11 + g22`` and with the stationary two-adjacent
    values ``1/2 +- 1/pi``.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (2, 2):
        raise ValueError("expected a 2 x 2 overlap matrix")
    mean = (g[0, 0] + g[1, 1]) / 2.0
    radius = math.hypot((g[0, 0] - g[1, 1]) / 2.0, g[0, 1])
    return (mean + radius, mean - radius)
