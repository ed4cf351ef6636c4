"""Block-Toeplitz spectral route to the entropy of the evolved sea string.

The reflected sea correlation matrix factorizes as ``Gamma' = Psi^2`` with the
real symmetric block-Toeplitz kernel

    Psi_mn = (-1)^n J_{m-n}(4t),   m, n >= 0,

built from 2 x 2 blocks ``Pi_l = [[J_2l, J_{2l+1}], [-J_{2l-1}, -J_{2l}]]``.
The entropy is a contour integral of ``e(lambda^2)`` against the log-
derivative of ``det(lambda - Psi)`` along a curve that encloses the unit disk
while avoiding the point 1 and the interval [-1, 0]; for a finite truncation
the residue sum is exact, so

    S = sum_{lambda_j > 0} e(lambda_j^2)

over the eigenvalues of the truncated ``Psi``.  (Eigenvalues of the full
kernel come in pairs ``lambda, -lambda``; the contour keeps one of each pair,
and the modes it excludes sit at ``lambda^2 ~ 0, 1`` where ``e`` vanishes.)
The spectrum itself is interesting: eigenvalues accumulate at +-1, a number
growing ~linearly in t escapes the +-1 neighborhoods, yet almost all of those
cluster at 0 -- only ~ln t of them carry entropy.  :func:`eigen_census`
quantifies that clustering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_row
from .entropy import SpectralDomainError, entropy_from_spectrum
from .tl import TruncationPolicy, TruncationError

__all__ = ["PsiMatrix", "EigenCensus", "build_psi", "spectral_entropy_psi", "eigen_census"]

#: Eigenvalues of Psi may stray this far outside [-1, 1] before it's a bug.
SPECTRUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class PsiMatrix:
    """Truncated block-Toeplitz kernel: ``2N x 2N``, ``Psi_mn = (-1)^n J_{m-n}(4t)``."""

    time: float
    block_count: int
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return 2 * self.block_count

    def block(self, l: int) -> np.ndarray:
        """The 2 x 2 block ``Pi_l`` sitting ``l`` block-diagonals right of the main."""
        if not -self.block_count < l < self.block_count:
            raise IndexError(f"block offset {l} outside truncation")
        r = 0 if l >= 0 else -2 * l
        c = 2 * l if l >= 0 else 0
        return self.matrix[r:r + 2, c:c + 2]


@dataclass(frozen=True)
class EigenCensus:
    """Clustering counts of the ``Psi`` spectrum at radius ``epsilon``.

    ``near_minus``, ``near_zero``, ``near_plus`` count eigenvalues within
    ``epsilon`` of -1, 0, +1; ``outside`` counts the rest, so the four counts
    sum to the dimension ``2N``.  ``n_epsilon`` is the number escaping the
    +-1 neighborhoods (= ``near_zero + outside``).
    """

    time: float
    epsilon: float
    near_minus: int
    near_zero: int
    near_plus: int
    outside: int

    @property
    def total(self) -> int:
        return self.near_minus + self.near_zero + self.near_plus + self.outside

    @property
    def n_epsilon(self) -> int:
        return self.total - self.near_minus - self.near_plus


def build_psi(t: float, block_count: int | None = None,
              policy: TruncationPolicy | None = None) -> PsiMatrix:
    """Assemble the truncated kernel at time ``t``.

    Parameters
    ----------
    t : float
        Time; Bessel argument ``4t``.
    block_count : int, optional
        Number ``N`` of 2x2 blocks per side (matrix dimension ``2N``).
        Defaults to the policy minimum ``ceil(4t) + pad(4t)``; smaller values
        raise :class:`TruncationError`.
    policy : TruncationPolicy, optional

    Notes
    -----
    Symmetry is exact by construction:
    ``(-1)^n J_{m-n} = (-1)^m J_{n-m}`` holds entrywise in floating point
    because negative orders are produced by sign reflection of the same row.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    policy = policy or TruncationPolicy()
    minimum = TruncationPolicy().window_size(t)
    n_blocks = policy.window_size(t) if block_count is None else int(block_count)
    if n_blocks < minimum:
        raise TruncationError(
            f"{n_blocks} blocks cannot hold the light cone at t={t} (minimum {minimum})"
        )
    dim = 2 * n_blocks
    table = bessel_row(4.0 * t, -(dim - 1), dim - 1)
    m = np.arange(dim)
    psi = table.take(m[:, None] - m[None, :])
    psi[:, 1::2] *= -1.0
    return PsiMatrix(float(t), n_blocks, psi)


def spectral_entropy_psi(psi: PsiMatrix) -> float:
    """Entropy as the residue sum ``sum_{lambda > 0} e(lambda^2)``.

    The residue evaluation of the contour integral (see module docstring)
    keeps exactly the eigenvalues inside the curve -- the positive ones, one
    per ``(lambda, -lambda)`` pair.  Squared eigenvalues are clamped to [0, 1];
    values beyond ``1 + 1e-6`` indicate a defective kernel and raise.
    """
    lam = np.linalg.eigvalsh(psi.matrix)
    if lam.size and np.abs(lam).max() > 1.0 + SPECTRUM_TOLERANCE:
        raise SpectralDomainError(
            f"Psi spectrum outside [-1, 1]: |lambda|max = {np.abs(lam).max():.6e}"
        )
    positive = lam[lam > 0.0]
    return entropy_from_spectrum(np.clip(positive**2, 0.0, 1.0))


def eigen_census(psi: PsiMatrix, epsilon: float = 0.01) -> EigenCensus:
    """Count eigenvalues of ``Psi`` within ``epsilon`` of -1, 0, +1, and elsewhere."""
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    lam = np.linalg.eigvalsh(psi.matrix)
    near_minus = int(np.sum(np.abs(lam + 1.0) < epsilon))
    near_zero = int(np.sum(np.abs(lam) < epsilon))
    near_plus = int(np.sum(np.abs(lam - 1.0) < epsilon))
    outside = int(lam.size - near_minus - near_zero - near_plus)
    return EigenCensus(psi.time, epsilon, near_minus, near_zero, near_plus, outside)
