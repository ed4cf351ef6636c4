"""Brute-force exact-diagonalization oracle for short chains.

Everything here works with dense ``2^n x 2^n`` matrices (``n`` = number of
sites, capped at 8) and knows nothing about free fermions: the Hamiltonian is
built from Pauli matrices, Heisenberg evolution uses its eigendecomposition,
and the operator entanglement entropy comes from a singular value
decomposition of the operator's coefficient matrix across the middle cut.
Agreement with the correlation-matrix engines is therefore a genuine
end-to-end check of the fermionic machinery.

Two independent coefficient routes are provided:

* the *Pauli route* expands the operator site by site in the orthonormal
  single-site basis ``{1, x, y, z}``;
* the *Majorana route* expands it over products of staggered Majorana
  strings, treating each basis string as a signed permutation of
  computational basis states and never forming it as a dense matrix.

Both give the same singular values (the bases differ by unilateral
unitaries), which the tests exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .finite import build_generator
from .lattice import ChainConfig, OperatorSpec, occupation_profile

__all__ = [
    "MAX_ED_SITES",
    "SignedPermutation",
    "build_hamiltonian",
    "majorana_matrix",
    "string_matrix",
    "initial_operator",
    "heisenberg_evolve",
    "pauli_coefficient_tensor",
    "majorana_coefficient_matrix",
    "operator_entropy_ed",
    "evolved_entropy_ed",
    "commutator_coefficients",
    "verify_generator",
]

#: Hilbert-space dimension 2^8 = 256 keeps every routine below comfortably fast.
MAX_ED_SITES = 8

PAULI_1 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: Single-site basis in digit order; digit d of a coefficient tensor refers here.
PAULI_BASIS = (PAULI_1, PAULI_X, PAULI_Y, PAULI_Z)


def _check_size(config: ChainConfig) -> None:
    if config.num_sites > MAX_ED_SITES:
        raise ValueError(
            f"exact diagonalization is capped at {MAX_ED_SITES} sites, got {config.num_sites}"
        )


@dataclass(frozen=True)
class SignedPermutation:
    """A matrix with one nonzero entry per column: ``M e_j = phase[j] e_{perm[j]}``.

    Pauli strings and Majorana strings are all of this form, so products and
    trace inner products never need dense matrix algebra.
    """

    perm: np.ndarray
    phase: np.ndarray

    @classmethod
    def identity(cls, dim: int) -> "SignedPermutation":
        return cls(np.arange(dim), np.ones(dim, dtype=complex))

    @property
    def dim(self) -> int:
        return self.perm.size

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        # (self @ other) e_j = phase_o[j] * self e_{perm_o[j]}
        return SignedPermutation(self.perm[other.perm], self.phase[other.perm] * other.phase)

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        out[self.perm, np.arange(self.dim)] = self.phase
        return out

    def overlap(self, operator: np.ndarray) -> complex:
        """Normalized inner product ``dim^-1 tr(self^dagger operator)``."""
        cols = np.arange(self.dim)
        return complex(np.dot(np.conj(self.phase), operator[self.perm, cols]) / self.dim)


def _site_operator(num_sites: int, site_index: int, kind: str) -> SignedPermutation:
    """Jordan-Wigner-style signed permutation: z-string on sites < site_index, then x or y.

    Site 0 is the leftmost chain site and occupies the most significant qubit,
    matching the Kronecker-product convention of :func:`build_hamiltonian`.
    """
    dim = 1 << num_sites
    states = np.arange(dim)
    bit = 1 << (num_sites - 1 - site_index)
    zmask = (dim - 1) ^ (2 * bit - 1)  # bits of all sites strictly left of site_index
    tail_sign = 1.0 - 2.0 * (_popcount(states & zmask) & 1)
    perm = states ^ bit
    if kind == "x":
        phase = tail_sign.astype(complex)
    elif kind == "y":
        onsite = 1.0j * (1.0 - 2.0 * ((states & bit) != 0))
        phase = tail_sign * onsite
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return SignedPermutation(perm, phase)


def _popcount(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values).astype(np.int64)


def _kron_site(num_sites: int, site_index: int, op: np.ndarray) -> np.ndarray:
    left = np.eye(1 << site_index, dtype=complex)
    right = np.eye(1 << (num_sites - 1 - site_index), dtype=complex)
    return np.kron(np.kron(left, op), right)


def build_hamiltonian(config: ChainConfig) -> np.ndarray:
    """Dense ``sum_j x_j x_{j+1} + h sum_j z_j`` on the open chain.

    This is the frame in which the staggered labels are literally
    string-of-z times x (odd label) or y (even label); the spectrum is the
    same as for the dual frame with z-bonds and a transverse x field.
    """
    _check_size(config)
    n = config.num_sites
    dim = 1 << n
    ham = np.zeros((dim, dim), dtype=complex)
    for s in range(n - 1):
        ham += _kron_site(n, s, PAULI_X) @ _kron_site(n, s + 1, PAULI_X)
    for s in range(n):
        ham += config.field * _kron_site(n, s, PAULI_Z)
    return ham


def _majorana_perm(config: ChainConfig, label: int) -> SignedPermutation:
    if not config.contains_label(label):
        raise ValueError(f"staggered label {label} outside chain")
    site = (label + 1) // 2  # label = 2n-1 or 2n -> site n
    site_index = site + config.half_length - 1
    kind = "x" if label % 2 else "y"
    return _site_operator(config.num_sites, site_index, kind)


def majorana_matrix(config: ChainConfig, label: int) -> np.ndarray:
    """Dense staggered Majorana operator for one label."""
    _check_size(config)
    return _majorana_perm(config, label).to_matrix()


def _string_perm(config: ChainConfig, labels) -> SignedPermutation:
    acc = SignedPermutation.identity(1 << config.num_sites)
    previous = None
    for label in labels:
        if previous is not None and label <= previous:
            raise ValueError("string labels must be strictly ascending")
        previous = label
        acc = acc @ _majorana_perm(config, int(label))
    return acc


def string_matrix(config: ChainConfig, labels) -> np.ndarray:
    """Dense ordered product of Majorana operators, labels strictly ascending."""
    _check_size(config)
    return _string_perm(config, labels).to_matrix()


def initial_operator(config: ChainConfig, spec: OperatorSpec) -> np.ndarray:
    """Dense time-zero operator for a parsed spec.

    Sea-string specs truncate to the chain: the product runs over every
    occupied label the chain actually contains.
    """
    _check_size(config)
    labels = np.asarray(config.staggered_range())
    profile = occupation_profile(spec)
    return string_matrix(config, labels[profile.occupied(labels)])


def heisenberg_evolve(hamiltonian: np.ndarray, operator: np.ndarray, t: float) -> np.ndarray:
    """``exp(iHt) A exp(-iHt)`` via one eigendecomposition."""
    evals, vecs = np.linalg.eigh(hamiltonian)
    phases = np.exp(1.0j * evals * t)
    rotate = (vecs * phases) @ vecs.conj().T
    return rotate @ operator @ rotate.conj().T


def pauli_coefficient_tensor(operator: np.ndarray, config: ChainConfig) -> np.ndarray:
    """Expansion coefficients over site-ordered Pauli products, shape ``(4,) * n``.

    Axis ``s`` is chain site ``s`` (leftmost first); digit values follow
    :data:`PAULI_BASIS`.  Parseval: ``sum |a|^2 = 2^-n tr(A^dagger A)``.
    """
    _check_size(config)
    n = config.num_sites
    dim = 1 << n
    if operator.shape != (dim, dim):
        raise ValueError(f"operator shape {operator.shape} does not match {n} sites")
    transform = np.conj(np.stack(PAULI_BASIS)) / 2.0
    work = operator.reshape((2,) * (2 * n))
    # interleave (row_s, col_s) pairs so each site is two adjacent axes
    work = np.transpose(work, [axis for s in range(n) for axis in (s, n + s)])
    for _ in range(n):
        work = np.moveaxis(np.tensordot(transform, work, axes=([1, 2], [0, 1])), 0, -1)
    return work


@lru_cache(maxsize=8)
def _half_strings(half: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All ``4^half`` half-chain Majorana strings as stacked perms/phases/parities.

    String index encodes per-site digits, site-major (leftmost site most
    significant); digit bit 0 = odd label present, bit 1 = even label present,
    labels multiplied in ascending order.
    """
    dim = 1 << half
    count = 4**half
    singles = []
    for c in range(1, 2 * half + 1):
        site_index = (c - 1) // 2
        kind = "x" if c % 2 else "y"
        singles.append(_site_operator(half, site_index, kind))
    perms = np.empty((count, dim), dtype=np.int64)
    phases = np.empty((count, dim), dtype=complex)
    parities = np.empty(count, dtype=np.int64)
    for idx in range(count):
        acc = SignedPermutation.identity(dim)
        weight = 0
        for s in range(half):
            digit = (idx >> (2 * (half - 1 - s))) & 3
            if digit & 1:
                acc = acc @ singles[2 * s]
                weight += 1
            if digit & 2:
                acc = acc @ singles[2 * s + 1]
                weight += 1
        perms[idx] = acc.perm
        phases[idx] = acc.phase
        parities[idx] = weight & 1
    return perms, phases, parities


def majorana_coefficient_matrix(operator: np.ndarray, config: ChainConfig) -> np.ndarray:
    """Expansion over (left string) x (right string) Majorana products.

    Entry ``[alpha, beta]`` is the coefficient of the ordered product of the
    left-half string ``alpha`` (labels <= 0) and the right-half string
    ``beta`` (labels >= 1); the z-tails of right-half labels cross the cut, so
    the left factor silently absorbs one full-half z-string per odd-parity
    ``beta``.  Shape ``(4^L, 4^L)`` for half-length ``L``.
    """
    _check_size(config)
    half = config.half_length
    dimh = 1 << half
    dim = dimh * dimh
    if operator.shape != (dim, dim):
        raise ValueError(f"operator shape {operator.shape} does not match {2 * half} sites")
    perms, phases, parities = _half_strings(half)
    zsigns = 1.0 - 2.0 * (_popcount(np.arange(dimh)) & 1)
    count = 4**half
    rows = np.arange(dimh)
    blocks = operator.reshape(dimh, dimh, dimh, dimh)  # [row_L, row_R, col_L, col_R]
    coeff = np.empty((count, count), dtype=complex)
    for alpha in range(count):
        gathered = blocks[perms[alpha], :, rows, :]  # [col_L, row_R, col_R]
        contract = {
            0: np.tensordot(np.conj(phases[alpha]), gathered, axes=1),
            1: np.tensordot(np.conj(phases[alpha] * zsigns), gathered, axes=1),
        }
        for beta in range(count):
            picked = contract[int(parities[beta])][perms[beta], rows]
            coeff[alpha, beta] = np.dot(np.conj(phases[beta]), picked) / dim
    return coeff


def operator_entropy_ed(operator: np.ndarray, config: ChainConfig, route: str = "pauli") -> float:
    """Operator entanglement entropy across the bond between sites 0 and 1.

    The operator is normalized to unit Frobenius weight, its coefficient
    matrix (left digits x right digits) is singular-value decomposed, and the
    squared singular values feed a Shannon sum.
    """
    _check_size(config)
    half = config.half_length
    if route == "pauli":
        tensor = pauli_coefficient_tensor(operator, config)
        matrix = tensor.reshape(4**half, 4**half)
    elif route == "majorana":
        matrix = majorana_coefficient_matrix(operator, config)
    else:
        raise ValueError(f"unknown route {route!r}")
    weights = np.linalg.svd(matrix, compute_uv=False) ** 2
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("zero operator has no entanglement entropy")
    weights = weights[weights > 1e-30 * total] / total
    return float(-(weights * np.log(weights)).sum())


def evolved_entropy_ed(config: ChainConfig, spec: OperatorSpec, t: float,
                       route: str = "pauli") -> float:
    """Entropy of the Heisenberg-evolved spec operator: the one-call oracle."""
    ham = build_hamiltonian(config)
    evolved = heisenberg_evolve(ham, initial_operator(config, spec), t)
    return operator_entropy_ed(evolved, config, route=route)


def commutator_coefficients(config: ChainConfig, label: int,
                            hamiltonian: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """Expand ``i[H, b_label]`` over single Majorana operators.

    Returns the coefficient vector over all chain labels (ascending) together
    with the squared weight the commutator carries *outside* that sector,
    which must vanish for a quadratic Hamiltonian.
    """
    _check_size(config)
    ham = build_hamiltonian(config) if hamiltonian is None else hamiltonian
    single = _majorana_perm(config, label).to_matrix()
    comm = 1.0j * (ham @ single - single @ ham)
    labels = config.staggered_range()
    coeffs = np.empty(len(labels))
    for k, m in enumerate(labels):
        value = _majorana_perm(config, m).overlap(comm)
        coeffs[k] = value.real
    dim = 1 << config.num_sites
    weight_total = float(np.vdot(comm, comm).real) / dim
    leak = weight_total - float(np.dot(coeffs, coeffs))
    return coeffs, leak


def verify_generator(config: ChainConfig) -> float:
    """Max deviation between brute-force commutator expansions and the generator.

    For every label ``b``, the coefficients of ``i[H, b]`` over single
    Majoranas must reproduce column ``b`` of the quadratic generator, with no
    weight leaking outside the single-Majorana sector.  Returns the worst
    absolute discrepancy over all columns (0 to machine precision).
    """
    _check_size(config)
    ham = build_hamiltonian(config)
    gen = build_generator(config).matrix
    labels = config.staggered_range()
    worst = 0.0
    for col, b in enumerate(labels):
        coeffs, leak = commutator_coefficients(config, b, hamiltonian=ham)
        worst = max(worst, float(np.abs(coeffs - gen[:, col]).max()), abs(leak))
    return worst
