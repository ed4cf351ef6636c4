"""First-kind Bessel functions ``J_n(x)`` over dense integer-order ranges.

The mode propagator of the critical chain needs entire rows ``J_{b-m}(x)`` of
Bessel values at a fixed argument ``x = 4t``, for orders running from far
below to far above the turning point ``|n| ~ x``.  These are produced with the
classical backward-recurrence scheme: the three-term recurrence

    J_{n-1}(x) = (2n/x) J_n(x) - J_{n+1}(x)

is numerically stable in the direction of decreasing order, so a trial
solution seeded above the turning point is recurred downward and the whole row
is normalized at the end with the identity

    J_0(x) + 2 * sum_{k>=1} J_{2k}(x) = 1.

Because the unwanted (growing) solution component decays like the square of
the Bessel envelope between the seed order and the turning point, seeding a
few Airy widths ``x**(1/3)`` above ``max(n_top, x)`` suffices for uniform
absolute accuracy near machine precision across the entire row -- including
arguments of order 10^4 and orders of order 10^4, well beyond where upward
recurrence or power series lose all digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["BesselTable", "bessel_row"]

# Seed this many orders above max(n_top, x): 12 Airy widths + a fixed floor.
# The contamination of the downward recurrence is suppressed by roughly the
# squared Bessel envelope exp(-2 * (2/3) * (2^(1/3) * s)^(3/2)) at s widths,
# which at s = 12 is < 1e-60.
_AIRY_MARGIN = 12.0
_MARGIN_FLOOR = 40

# Rescale the running pair whenever it exceeds this magnitude; keeps the
# unnormalized trial solution inside the double range even when the requested
# orders sit thousands of e-foldings below the turning point.
_RESCALE_LIMIT = 1e250
_RESCALE_FACTOR = 1e-250


def _seed_order(x: float, n_top: int) -> int:
    margin = int(_AIRY_MARGIN * max(1.0, x) ** (1.0 / 3.0)) + _MARGIN_FLOOR
    return max(n_top, int(math.ceil(x))) + margin


@lru_cache(maxsize=64)
def _nonnegative_row(x: float, n_top: int) -> np.ndarray:
    """``J_n(x)`` for ``n = 0..n_top`` by backward recurrence; cached per argument."""
    out = np.zeros(n_top + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    start = _seed_order(x, n_top)
    two_over_x = 2.0 / x
    norm = 0.0  # accumulates J_0 + 2 * sum_{k>=1} J_2k over all visited orders
    upper = 0.0  # trial J_{n+1}
    current = 1e-305  # trial J_n at n = start (arbitrary tiny seed)
    for n in range(start, -1, -1):
        if n <= n_top:
            out[n] = current
        if n % 2 == 0:
            norm += current if n == 0 else 2.0 * current
        lower = two_over_x * n * current - upper
        upper = current
        current = lower
        if abs(current) > _RESCALE_LIMIT:
            current *= _RESCALE_FACTOR
            upper *= _RESCALE_FACTOR
            norm *= _RESCALE_FACTOR
            out[min(n, n_top):] *= _RESCALE_FACTOR
    out /= norm
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BesselTable:
    """Values ``J_n(argument)`` for every integer order ``n_min <= n <= n_max``."""

    argument: float
    n_min: int
    n_max: int
    values: np.ndarray

    def orders(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def __getitem__(self, n: int) -> float:
        if not self.n_min <= n <= self.n_max:
            raise IndexError(f"order {n} outside table range [{self.n_min}, {self.n_max}]")
        return float(self.values[n - self.n_min])

    def take(self, orders: np.ndarray) -> np.ndarray:
        """Values at an integer array of orders (vectorized lookup)."""
        return self.values[np.asarray(orders) - self.n_min]


def bessel_row(x: float, n_min: int, n_max: int) -> BesselTable:
    """Tabulate ``J_n(x)`` for all integer orders ``n`` in ``[n_min, n_max]``.

    Parameters
    ----------
    x : float
        Argument, ``x >= 0``.  Arguments up to order 10^5 are supported; the
        cost is linear in ``max(|n|, x)``.
    n_min, n_max : int
        Inclusive order range; may be negative (negative orders use the
        reflection ``J_{-n} = (-1)^n J_n``).

    Returns
    -------
    BesselTable
        Absolute accuracy is ~1e-13 uniformly over the row.
    """
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"Bessel argument must be finite and nonnegative, got {x}")
    if n_max < n_min:
        raise ValueError(f"empty order range [{n_min}, {n_max}]")
    n_top = max(abs(n_min), abs(n_max))
    row = _nonnegative_row(float(x), int(n_top))
    orders = np.arange(n_min, n_max + 1)
    values = row[np.abs(orders)].copy()
    odd_negative = (orders < 0) & (orders % 2 != 0)
    values[odd_negative] *= -1.0
    values.setflags(write=False)
    return BesselTable(float(x), int(n_min), int(n_max), values)
