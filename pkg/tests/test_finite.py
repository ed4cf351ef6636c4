"""Quadratic generator, finite-chain propagator, and the windowed engine."""

import math

import numpy as np
import pytest

from osee.bessel import bessel_row
from osee.entropy import entropy_from_correlation
from osee.finite import FiniteEngine, build_generator, correlation_matrix_finite, propagate
from osee.lattice import ChainConfig, OperatorRangeError, occupation_profile, parse_operator_spec

LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# generator structure
# ---------------------------------------------------------------------------

def test_generator_is_real_antisymmetric():
    gen = build_generator(ChainConfig(5, 0.7))
    m = gen.matrix
    assert m.shape == (20, 20)
    assert m.dtype == np.float64
    assert np.abs(m + m.T).max() == 0.0


def test_generator_single_pair_chain_explicit():
    # 2 sites, labels (-1, 0, 1, 2); boundary couplings drop out
    h = 0.7
    gen = build_generator(ChainConfig(1, h))
    expected = np.array([
        [0.0, 2 * h, 0.0, 0.0],
        [-2 * h, 0.0, 2.0, 0.0],
        [0.0, -2.0, 0.0, 2 * h],
        [0.0, 0.0, -2 * h, 0.0],
    ])
    assert np.array_equal(gen.matrix, expected)
    assert list(gen.labels) == [-1, 0, 1, 2]


def test_generator_coupling_pattern_in_the_bulk():
    h = 1.3
    cfg = ChainConfig(3, h)
    gen = build_generator(cfg)
    pos = {int(b): k for k, b in enumerate(gen.labels)}
    j = 0  # bulk site
    # Y_j couples forward to X_{j+1} with +2 and back to X_j with -2h
    assert gen.matrix[pos[2 * j], pos[2 * j + 1]] == 2.0
    assert gen.matrix[pos[2 * j], pos[2 * j - 1]] == -2 * h
    # X_j couples to Y_j with +2h and back to Y_{j-1} with -2
    assert gen.matrix[pos[2 * j - 1], pos[2 * j]] == 2 * h
    assert gen.matrix[pos[2 * j - 1], pos[2 * j - 2]] == -2.0


def test_generator_field_off_decouples_pairs():
    # at h = 0 only the +-2 hopping terms survive
    gen = build_generator(ChainConfig(2, 0.0))
    values = set(np.unique(gen.matrix))
    assert values == {-2.0, 0.0, 2.0}


# ---------------------------------------------------------------------------
# propagator
# ---------------------------------------------------------------------------

def test_propagator_is_identity_at_time_zero():
    gen = build_generator(ChainConfig(3, 0.9))
    u = propagate(gen, 0.0).matrix
    assert np.abs(u - np.eye(12)).max() < 1e-14


def test_propagator_is_real_orthogonal():
    gen = build_generator(ChainConfig(10, 1.0))
    u = propagate(gen, 3.7).matrix
    assert u.dtype == np.float64
    assert np.abs(u.T @ u - np.eye(40)).max() < 1e-10


def test_propagator_group_property():
    gen = build_generator(ChainConfig(6, 0.6))
    u1 = propagate(gen, 0.8).matrix
    u2 = propagate(gen, 1.5).matrix
    u3 = propagate(gen, 2.3).matrix
    assert np.abs(u2 @ u1 - u3).max() < 1e-10


def test_propagator_solves_the_generator_ode():
    # d/dt U = M U  (amplitudes flow along columns of M)
    gen = build_generator(ChainConfig(4, 0.8))
    dt = 1e-6
    u_minus = propagate(gen, 1.0 - dt).matrix
    u_plus = propagate(gen, 1.0 + dt).matrix
    derivative = (u_plus - u_minus) / (2 * dt)
    assert np.abs(derivative - gen.matrix @ propagate(gen, 1.0).matrix).max() < 1e-5


def test_critical_propagator_closed_form():
    # open-boundary sine modes: U_mn(t) = Re[ i^(m-n) * (2/(4L+1)) *
    #   sum_k sin(p_m k) sin(p_n k) exp(4 i cos(k pi / (4L+1)) t) ]
    cfg = ChainConfig(3, 1.0)
    t = 0.7
    gen = build_generator(cfg)
    u = propagate(gen, t).matrix
    n_modes = cfg.num_modes
    labels = gen.labels
    ks = np.arange(n_modes + 1)
    angles = np.pi * ks / (n_modes + 1)
    closed = np.zeros((n_modes, n_modes), dtype=complex)
    for a, m in enumerate(labels):
        for b, n in enumerate(labels):
            sines = np.sin((m + n_modes // 2) * angles) * np.sin((n + n_modes // 2) * angles)
            phases = np.exp(4j * np.cos(angles) * t)
            closed[a, b] = (1j) ** (m - n) * (2.0 / (n_modes + 1)) * np.sum(sines * phases)
    assert np.abs(closed.imag).max() < 1e-12
    assert np.abs(closed.real - u).max() < 1e-12


def test_critical_bulk_propagator_is_a_bessel_row():
    # far from the boundaries, U_mn(t) -> J_{n-m}(4t)
    cfg = ChainConfig(30, 1.0)
    t = 1.5
    gen = build_generator(cfg)
    u = propagate(gen, t).matrix
    pos = {int(b): k for k, b in enumerate(gen.labels)}
    table = bessel_row(4.0 * t, -24, 24)
    for m in (-6, -1, 0, 3):
        for n in range(-12, 13):
            assert u[pos[m], pos[n]] == pytest.approx(table[n - m], abs=1e-10)


def test_propagator_light_cone():
    cfg = ChainConfig(40, 1.0)
    t = 2.0
    u = propagate(build_generator(cfg), t).matrix
    labels = build_generator(cfg).labels
    distance = np.abs(labels[:, None] - labels[None, :])
    outside = distance > 4.0 * t + 40
    assert np.abs(u[outside]).max() < 1e-12


# ---------------------------------------------------------------------------
# correlation matrices
# ---------------------------------------------------------------------------

def test_full_window_trace_is_conserved():
    cfg = ChainConfig(8, 0.8)
    gen = build_generator(cfg)
    occ = occupation_profile(parse_operator_spec("F;X1", cfg))
    expected = occ.occupied(gen.labels).sum()
    for t in (0.0, 0.9, 2.4):
        gamma = correlation_matrix_finite(propagate(gen, t), occ, window=gen.labels)
        assert np.trace(gamma.matrix) == pytest.approx(expected, abs=1e-10)


def test_gamma_spectrum_within_unit_interval():
    cfg = ChainConfig(10, 1.0)
    gen = build_generator(cfg)
    occ = occupation_profile(parse_operator_spec("F", cfg))
    for t in (0.5, 2.0, 5.0):
        gamma = correlation_matrix_finite(propagate(gen, t), occ)
        ev = np.linalg.eigvalsh(gamma.matrix)
        assert ev.min() > -1e-9 and ev.max() < 1.0 + 1e-9


def test_default_window_is_the_left_half():
    cfg = ChainConfig(4, 1.0)
    gen = build_generator(cfg)
    occ = occupation_profile(parse_operator_spec("X1", cfg))
    gamma = correlation_matrix_finite(propagate(gen, 1.0), occ)
    assert list(gamma.labels) == list(range(-7, 1))
    assert gamma.matrix.shape == (8, 8)


def test_initial_correlation_is_a_projector_on_occupied_window_labels():
    cfg = ChainConfig(4, 0.7)
    gen = build_generator(cfg)
    occ = occupation_profile(parse_operator_spec("Y0,X-1", cfg))  # labels 0 and -3
    gamma = correlation_matrix_finite(propagate(gen, 0.0), occ)
    expected = np.zeros((8, 8))
    window = list(gamma.labels)
    expected[window.index(0), window.index(0)] = 1.0
    expected[window.index(-3), window.index(-3)] = 1.0
    assert np.abs(gamma.matrix - expected).max() < 1e-12


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

def test_engine_matches_windowed_correlation_route():
    cfg = ChainConfig(6, 0.9)
    engine = FiniteEngine(cfg)
    times = np.array([0.4, 1.1, 2.9])
    for op in ("X1", "X1,Y1", "F", "F;Y1", "I"):
        spec = parse_operator_spec(op, cfg)
        fast = engine.entropies(spec, times)
        slow = [entropy_from_correlation(engine.correlation(spec, t)) for t in times]
        assert np.abs(fast - np.asarray(slow)).max() < 1e-10


def test_engine_identity_operator_has_zero_entropy():
    engine = FiniteEngine(ChainConfig(5, 1.0))
    spec = parse_operator_spec("I")
    assert np.array_equal(engine.entropies(spec, np.array([0.0, 1.0, 3.0])), np.zeros(3))


def test_engine_rejects_labels_outside_chain():
    engine = FiniteEngine(ChainConfig(3, 1.0))
    with pytest.raises(OperatorRangeError):
        engine.entropies(parse_operator_spec("X40"), np.array([1.0]))


def test_single_majorana_saturates_near_ln2():
    engine = FiniteEngine(ChainConfig(30, 1.0))
    times = np.linspace(10.0, 14.0, 9)
    values = engine.entropies(parse_operator_spec("X1"), times)
    assert np.abs(values - LN2).max() < 0.05


def test_entropy_vanishes_at_time_zero_for_any_string():
    engine = FiniteEngine(ChainConfig(6, 0.8))
    for op in ("X1", "X1,Y1", "F", "F;X1,Y2"):
        spec = parse_operator_spec(op, engine.config)
        assert engine.entropies(spec, np.array([0.0]))[0] < 1e-12
