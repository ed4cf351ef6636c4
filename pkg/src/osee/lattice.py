"""Chain geometry and Majorana-string operator bookkeeping.

A spin-1/2 chain of ``2L`` sites is labelled ``j in {-L+1, ..., L}``, so that
the bipartition cut of interest sits between sites 0 and 1.  Jordan-Wigner
Majorana operators

    X_n = (prod_{j<n} sigma^z_j) sigma^x_n,
    Y_n = (prod_{j<n} sigma^z_j) sigma^y_n,

are tracked through a single staggered integer label ``b``: odd ``b = 2n - 1``
denotes ``X_n`` and even ``b = 2n`` denotes ``Y_n``.  On a finite chain the
staggered labels form the contiguous range ``{-2L+1, ..., 2L}`` and the cut
splits it into the left window ``b <= 0`` and its complement.

Basis operators of the spin algebra are products of distinct Majorana factors
("strings"); a string is identified here purely by the set of staggered labels
it contains.  Strings with a semi-infinite tail -- the half-filled product
``... X_0 Y_0`` occupying every ``b <= 0``, and its finite excitations -- are
stored as the set of deviations ("flips") from that tail.  Scalar phases of
strings are deliberately not tracked: the quadratic mode dynamics and the
entanglement entropy depend only on which labels are occupied.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ChainConfig",
    "OperatorSpec",
    "OccupationProfile",
    "OperatorSpecError",
    "OperatorSyntaxError",
    "OperatorRangeError",
    "OperatorSemanticsError",
    "parse_operator_spec",
    "pauli_to_majorana",
    "occupation_profile",
    "format_operator_spec",
    "label_from_token",
    "token_from_label",
]


class OperatorSpecError(ValueError):
    """Base class for operator-specification failures."""


class OperatorSyntaxError(OperatorSpecError):
    """Malformed operator text (unknown token or bad structure)."""


class OperatorRangeError(OperatorSpecError):
    """Site or staggered label outside the configured lattice."""


class OperatorSemanticsError(OperatorSpecError):
    """Well-formed input with contradictory meaning (e.g. duplicate labels)."""


@dataclass(frozen=True)
class ChainConfig:
    """Open chain of ``2 * half_length`` spin-1/2 sites in a transverse field.

    Attributes
    ----------
    half_length : int
        ``L``.  Sites are ``j in {-L+1, ..., L}``; staggered Majorana labels
        are ``b in {-2L+1, ..., 2L}``.
    field : float
        Dimensionless transverse-field strength ``h``.
    """

    half_length: int
    field: float

    def __post_init__(self) -> None:
        if int(self.half_length) != self.half_length or self.half_length < 1:
            raise ValueError("half_length must be a positive integer")

    @property
    def num_sites(self) -> int:
        return 2 * self.half_length

    @property
    def num_modes(self) -> int:
        """Number of staggered Majorana labels, ``4L``."""
        return 4 * self.half_length

    def site_range(self) -> np.ndarray:
        L = self.half_length
        return np.arange(-L + 1, L + 1)

    def staggered_range(self) -> np.ndarray:
        L = self.half_length
        return np.arange(-2 * L + 1, 2 * L + 1)

    def left_window(self) -> np.ndarray:
        """Staggered labels left of the cut, ``{-2L+1, ..., 0}``."""
        return np.arange(-2 * self.half_length + 1, 1)

    def contains_site(self, j: int) -> bool:
        return -self.half_length + 1 <= j <= self.half_length

    def contains_label(self, b: int) -> bool:
        return -2 * self.half_length + 1 <= b <= 2 * self.half_length

    def label_position(self, b: int) -> int:
        """Array index of staggered label ``b`` in ``staggered_range()``."""
        if not self.contains_label(b):
            raise OperatorRangeError(
                f"staggered label {b} outside {{-{2 * self.half_length - 1}, ..., "
                f"{2 * self.half_length}}}"
            )
        return b + 2 * self.half_length - 1


@dataclass(frozen=True)
class OperatorSpec:
    """A Majorana-string basis operator, up to an untracked scalar phase.

    ``kind == "finite"``: the string contains exactly the labels in ``flips``
    (``K = len(flips)`` Majorana factors).  ``kind == "infinite"``: the string
    carries the semi-infinite tail occupying all ``b <= 0``, and ``flips``
    lists the labels whose occupation deviates from that tail.
    """

    kind: str
    flips: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("finite", "infinite"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        labels = tuple(sorted(int(b) for b in self.flips))
        if len(set(labels)) != len(labels):
            raise OperatorSemanticsError(f"duplicate Majorana labels in {self.flips}")
        object.__setattr__(self, "flips", labels)

    @classmethod
    def finite_index(cls, labels: Sequence[int] = ()) -> "OperatorSpec":
        return cls("finite", tuple(labels))

    @classmethod
    def infinite_index(cls, flips: Sequence[int] = ()) -> "OperatorSpec":
        return cls("infinite", tuple(flips))

    @property
    def index(self) -> float:
        """Number of Majorana factors: ``len(flips)`` or ``inf`` for sea tails."""
        return math.inf if self.kind == "infinite" else float(len(self.flips))

    @property
    def is_identity(self) -> bool:
        return self.kind == "finite" and not self.flips


@dataclass(frozen=True)
class OccupationProfile:
    """Occupation number of every staggered label for one basis string.

    ``evaluate(b) = (left_fill and b <= 0) XOR (b in flip_set)``; the total
    occupation is finite iff ``left_fill == 0``.
    """

    left_fill: int
    flip_set: frozenset[int]

    def __post_init__(self) -> None:
        if self.left_fill not in (0, 1):
            raise ValueError("left_fill must be 0 or 1")

    def evaluate(self, b: int) -> int:
        filled = bool(self.left_fill) and b <= 0
        return int(filled != (b in self.flip_set))

    def occupied(self, labels: np.ndarray) -> np.ndarray:
        """Vectorized ``evaluate`` over an array of staggered labels."""
        labels = np.asarray(labels)
        if self.left_fill:
            base = labels <= 0
        else:
            base = np.zeros(labels.shape, dtype=bool)
        if not self.flip_set:
            return base
        return base ^ np.isin(labels, np.fromiter(self.flip_set, dtype=np.int64))

    @property
    def total_is_finite(self) -> bool:
        return self.left_fill == 0


_MAJORANA_TOKEN = re.compile(r"([XY])(-?\d+)\Z")
_PAULI_TOKEN = re.compile(r"([xyz])@(-?\d+)\Z")


def label_from_token(token: str) -> int:
    """Staggered label of a Majorana token, e.g. ``X1 -> 1``, ``Y-2 -> -4``."""
    m = _MAJORANA_TOKEN.match(token)
    if m is None:
        raise OperatorSyntaxError(f"malformed Majorana token {token!r}")
    letter, n = m.group(1), int(m.group(2))
    return 2 * n - 1 if letter == "X" else 2 * n


def token_from_label(b: int) -> str:
    """Inverse of :func:`label_from_token`."""
    if b % 2 != 0:
        return f"X{(b + 1) // 2}"
    return f"Y{b // 2}"


def _parse_label_list(body: str) -> tuple[int, ...]:
    labels = []
    for piece in body.split(","):
        token = piece.strip()
        if not token:
            raise OperatorSyntaxError(f"empty token in operator list {body!r}")
        labels.append(label_from_token(token))
    return tuple(labels)


def _check_range(spec: OperatorSpec, config: ChainConfig | None) -> OperatorSpec:
    if config is not None:
        for b in spec.flips:
            if not config.contains_label(b):
                raise OperatorRangeError(
                    f"label {b} ({token_from_label(b)}) outside the chain with "
                    f"2L={config.num_sites}"
                )
    return spec


def parse_operator_spec(text: str, config: ChainConfig | None = None) -> OperatorSpec:
    """Parse an operator-specification string.

    Grammar (ASCII)::

        finite string   :  comma-separated Majorana tokens  "X<n>" | "Y<n>"
        identity        :  "I"
        sea tail        :  "F"  or  "F;<finite string>"
        Pauli product   :  "pauli:" followed by space-separated "<letter>@<site>"
                           tokens with letter in {x, y, z}

    Whitespace around commas is insignificant.  ``n`` and ``site`` are signed
    integers.

    Parameters
    ----------
    text : str
        Specification to parse.
    config : ChainConfig or None
        ``None`` selects thermodynamic-limit semantics (labels unbounded, Pauli
        x/y factors produce sea tails).  A config selects finite-chain
        semantics: labels are range-checked, Pauli x/y tails are materialized
        starting at ``b = -2L+1``, and a sea-tail spec is interpreted with the
        tail truncated to ``{-2L+1, ..., 0}`` by the finite-chain engine.

    Raises
    ------
    OperatorSyntaxError, OperatorRangeError, OperatorSemanticsError
    """
    body = text.strip()
    if not body:
        raise OperatorSyntaxError("empty operator specification")
    if body.startswith("pauli:"):
        factor_text = body[len("pauli:"):].strip()
        if not factor_text:
            raise OperatorSyntaxError("'pauli:' must be followed by letter@site factors")
        factors = []
        for token in factor_text.split():
            m = _PAULI_TOKEN.match(token)
            if m is None:
                raise OperatorSyntaxError(f"malformed Pauli token {token!r}")
            factors.append((int(m.group(2)), m.group(1)))
        return pauli_to_majorana(factors, config)
    if body == "I":
        return OperatorSpec.finite_index(())
    if body == "F" or body.startswith("F;"):
        rest = body[2:].strip() if body.startswith("F;") else ""
        if body.startswith("F;") and not rest:
            raise OperatorSyntaxError("'F;' must be followed by a Majorana token list")
        flips = _parse_label_list(rest) if rest else ()
        return _check_range(OperatorSpec.infinite_index(flips), config)
    return _check_range(OperatorSpec.finite_index(_parse_label_list(body)), config)


def _range_vs_sea(cutoff: int) -> set[int]:
    """Symmetric difference of the occupation sets ``{b <= cutoff}`` and ``{b <= 0}``."""
    if cutoff >= 1:
        return set(range(1, cutoff + 1))
    if cutoff <= -1:
        return set(range(cutoff + 1, 1))
    return set()


def pauli_to_majorana(
    factors: Sequence[tuple[int, str]], config: ChainConfig | None = None
) -> OperatorSpec:
    """Occupation pattern of a product of single-site Pauli factors.

    Each factor maps to a Majorana label set:

    ====================  =================================================
    ``sigma^z_n``         ``{2n-1, 2n}``  (= -i X_n Y_n)
    ``sigma^x_n``         all ``b <= 2n-2`` plus ``{2n-1}``
    ``sigma^y_n``         all ``b <= 2n-2`` plus ``{2n}``
    ====================  =================================================

    Products compose by symmetric difference of the label sets (every Majorana
    factor squares to one), and the scalar phase accumulated while reordering
    factors is discarded -- it affects neither occupations nor the entropy.

    In the thermodynamic limit (``config is None``) the "all ``b <= ...``"
    tails remain semi-infinite, so a product with an odd number of x/y factors
    yields an infinite-index spec.  On a finite chain the tails start at
    ``b = -2L+1`` and every product is a finite string.

    Parameters
    ----------
    factors : sequence of (site, letter)
        Pauli factors in the given order; letter in ``{"x", "y", "z"}``.
        Repeated identical factors cancel.
    config : ChainConfig or None
        Finite-chain vs thermodynamic-limit semantics, as in
        :func:`parse_operator_spec`.
    """
    tail = 0
    flips: set[int] = set()
    for site, letter in factors:
        if letter not in ("x", "y", "z"):
            raise OperatorSyntaxError(f"unknown Pauli letter {letter!r}")
        if config is not None and not config.contains_site(site):
            raise OperatorRangeError(
                f"site {site} outside {{-{config.half_length - 1}, ..., "
                f"{config.half_length}}}"
            )
        if letter == "z":
            factor_tail, factor_flips = 0, {2 * site - 1, 2 * site}
        else:
            top = 2 * site - 1 if letter == "x" else 2 * site
            cutoff = 2 * site - 2
            if config is None:
                factor_tail = 1
                factor_flips = _range_vs_sea(cutoff) ^ {top}
            else:
                factor_tail = 0
                low = -2 * config.half_length + 1
                factor_flips = set(range(low, cutoff + 1)) ^ {top}
        tail ^= factor_tail
        flips ^= factor_flips
    if tail:
        return OperatorSpec.infinite_index(sorted(flips))
    return _check_range(OperatorSpec.finite_index(sorted(flips)), config)


def occupation_profile(spec: OperatorSpec) -> OccupationProfile:
    """Occupation-number function of a basis string."""
    left_fill = 1 if spec.kind == "infinite" else 0
    return OccupationProfile(left_fill, frozenset(spec.flips))


def format_operator_spec(spec: OperatorSpec) -> str:
    """Canonical string form; inverse of :func:`parse_operator_spec`."""
    if spec.kind == "infinite":
        if not spec.flips:
            return "F"
        return "F;" + ",".join(token_from_label(b) for b in spec.flips)
    if not spec.flips:
        return "I"
    return ",".join(token_from_label(b) for b in spec.flips)
