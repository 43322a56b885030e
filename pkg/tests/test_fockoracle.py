import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twomode.blochstate import BlochState, bloch_to_fock, uncertainty_product
from twomode.characteristic import solve
from twomode.fockoracle import (
    NonConvergenceError,
    PropagatorConfig,
    build_full_hamiltonian,
    build_transformed_hamiltonian,
    compare_with_oracle,
    oracle_delta,
    predicted_state,
    propagate,
)
from twomode.regimes import Regime
from twomode.schedules import HarmonicSchedule as H
from twomode.schedules import ScheduleSet, detuning_phase

PI = math.pi
G0 = 625 * PI


def ss_on(g=H(G0), wa=H(G0 / 10), wb=H(G0 / 20), **kw):
    return ScheduleSet(wa, wb, g, Regime.on_resonant(), **kw)


params = st.tuples(st.floats(-50, 50), st.floats(-50, 50), st.floats(0, 20), st.floats(0, 5),
                   st.floats(0, 5), st.floats(0, 5), st.floats(-3, 3))


# --- Hamiltonian assembly --------------------------------------------------------

def test_single_atom_collision_block_vanishes():
    ss = ScheduleSet(H(0.0), H(0.0), H(0.0), gamma_a=3.0, gamma_b=4.0, gamma_ab=5.0)
    np.testing.assert_array_equal(build_full_hamiltonian(ss, 1, 0.0), 0.0)


def test_single_atom_coupling_elements():
    ss = ScheduleSet(H(2.0), H(1.0), H(0.7), delta0=0.4)
    h = build_full_hamiltonian(ss, 1, 0.0)
    # index 0 = |1,0>, index 1 = |0,1>; <1,0| a^dag b |0,1> = 1
    assert h[0, 1] == pytest.approx(-0.7 * np.exp(-0.4j))
    assert h[1, 0] == pytest.approx(-0.7 * np.exp(0.4j))
    np.testing.assert_allclose(np.diag(h).real, [2.0, 1.0])


def test_full_hamiltonian_diagonal_for_two_atoms():
    ss = ScheduleSet(H(2.0), H(1.0), H(0.0), gamma_a=3.0, gamma_b=4.0, gamma_ab=5.0)
    # |2,0>: 2 wa + 2 ga; |1,1>: wa + wb + gab; |0,2>: 2 wb + 2 gb
    np.testing.assert_allclose(np.diag(build_full_hamiltonian(ss, 2, 0.0)).real, [10.0, 8.0, 10.0])


@settings(max_examples=25)
@given(p=params, n=st.integers(1, 8), t=st.floats(0, 1))
def test_hermiticity(p, n, t):
    wa, wb, g, ga, gb, gab, d0 = p
    ss = ScheduleSet(H(wa, 1.0, 3.0), H(wb), H(g, 0.5, 2.0), delta0=d0, gamma_a=ga, gamma_b=gb, gamma_ab=gab)
    h = build_full_hamiltonian(ss, n, t)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-12)
    for part in build_transformed_hamiltonian(ss, n, t, 1.1, 0.3):
        np.testing.assert_allclose(part, part.conj().T, atol=1e-12)


def test_inelastic_part_vanishes_without_imbalance():
    ss = ss_on(gamma_a=2.0, gamma_b=2.0, gamma_ab=4.0)
    _, _, h_inel = build_transformed_hamiltonian(ss, 6, 0.001, 1.2, 0.4)
    np.testing.assert_array_equal(h_inel, 0.0)


def test_inelastic_part_present_otherwise():
    ss = ss_on(gamma_a=2.0, gamma_b=3.0, gamma_ab=1.0)
    _, _, h_inel = build_transformed_hamiltonian(ss, 6, 0.001, 1.2, 0.4)
    assert np.abs(h_inel).max() > 0.1


def test_elastic_part_at_north_pole_is_original_collision_block():
    ss = ScheduleSet(H(0.0), H(0.0), H(0.0), gamma_a=2.0, gamma_b=3.0, gamma_ab=1.5)
    _, h_el, _ = build_transformed_hamiltonian(ss, 5, 0.0, 0.0, 0.7)
    np.testing.assert_allclose(h_el, build_full_hamiltonian(ss, 5, 0.0), atol=1e-14)


def test_effective_frequency_diagonal():
    ss = ScheduleSet(H(5.0), H(2.0), H(1.5), delta0=0.2)
    r, phi = 1.0, 0.9
    diag, _, _ = build_transformed_hamiltonian(ss, 1, 0.0, r, phi)
    shift = 1.5 * math.cos(phi - 0.2) * math.tan(r / 2)
    np.testing.assert_allclose(np.diag(diag).real, [5.0 - shift, 2.0 + shift], atol=1e-14)


def test_oracle_delta_matches_quadrature():
    ss = ss_on(wa=H(G0 / 10, G0 / 5, G0 / 3, 0.4), delta0=0.3)
    t = np.linspace(0, 3 * PI / G0, 7)
    np.testing.assert_allclose(oracle_delta(ss, 0.0, t), detuning_phase(ss, 0.0, t), atol=1e-10)


# --- propagation --------------------------------------------------------------------

def test_diagonal_evolution_exact_phases():
    n = 3
    ss = ScheduleSet(H(2.0), H(0.5), H(0.0))
    psi0 = np.ones(n + 1, dtype=complex) / 2
    t = np.array([0.0, 0.4, 1.3])
    out = propagate(psi0, ss, n, 0.0, t)
    k = np.arange(n + 1)
    energy = 2.0 * (n - k) + 0.5 * k
    np.testing.assert_allclose(out, psi0 * np.exp(-1j * np.outer(t, energy)), atol=1e-10)


@pytest.mark.parametrize("scheme", ["magnus4", "midpoint"])
def test_single_atom_rabi_flopping(scheme):
    ss = ScheduleSet(H(1.0), H(1.0), H(G0), Regime.on_resonant())
    t = np.linspace(0, 2 / G0, 21)
    out = propagate(np.array([1.0, 0.0]), ss, 1, 0.0, t, PropagatorConfig(scheme=scheme))
    np.testing.assert_allclose(np.abs(out[:, 0]) ** 2 - np.abs(out[:, 1]) ** 2, np.cos(2 * G0 * t), atol=1e-8)


def test_step_halving_changes_fidelity_negligibly():
    ss = ss_on(g=H(G0, G0 / 2, G0))
    psi0 = bloch_to_fock(BlochState(4, 1.0, 0.3))
    t = np.linspace(0, 2 * PI / G0, 5)
    a = propagate(psi0, ss, 4, 0.0, t)
    b = propagate(psi0, ss, 4, 0.0, t, PropagatorConfig(step=PI / G0 / 4000))
    assert 1 - abs(np.vdot(a[-1], b[-1])) ** 2 < 1e-10


def test_magnus_is_fourth_order():
    from twomode.fockoracle import _builder, _run

    ss = ss_on(g=H(G0, G0, G0))
    psi0 = bloch_to_fock(BlochState(2, 0.8, 0.1))
    t = np.array([PI / G0])
    ref = _run(psi0, ss, _builder(2), 0.0, t, 0.0025 / G0, 1, "magnus4")
    errs = [np.abs(_run(psi0, ss, _builder(2), 0.0, t, h / G0, 1, "magnus4") - ref).max() for h in (0.08, 0.04)]
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.15)


def test_norm_drift_over_long_run():
    ss = ss_on(g=H(G0, G0 / 3, G0 / 2), gamma_a=G0 / 20, gamma_b=G0 / 30, gamma_ab=G0 / 25)
    out = propagate(bloch_to_fock(BlochState(6, 1.0, 0.0)), ss, 6, 0.0, np.linspace(0, 20 * PI / G0, 11))
    assert np.abs(np.linalg.norm(out, axis=1) - 1).max() < 1e-10


def test_propagate_validation():
    ss = ss_on()
    with pytest.raises(ValueError):
        propagate(np.array([1.0, 0.0, 0.0]), ss, 1, 0.0, [0.0])
    with pytest.raises(ValueError):
        propagate(np.array([2.0, 0.0]), ss, 1, 0.0, [0.0])
    with pytest.raises(ValueError):
        propagate(np.array([1.0, 0.0]), ss, 1, 0.0, [1.0, 0.5])
    with pytest.raises(NonConvergenceError):
        propagate(np.array([1.0, 0.0]), ss, 1, 0.0, [1.0], PropagatorConfig(max_steps=10))
    with pytest.raises(ValueError):
        PropagatorConfig(scheme="euler")


# --- comparison with the analytic pipeline -------------------------------------------------

def test_predicted_state_at_start():
    np.testing.assert_allclose(predicted_state(1.0, 0.4, 0.0, 5), bloch_to_fock(BlochState(5, 1.0, 0.4)))


def test_exact_regime_stays_on_bloch_manifold():
    n = 8
    ss = ss_on(gamma_a=G0 / 20, gamma_b=G0 / 20, gamma_ab=G0 / 10)
    traj = solve(PI / 3, 0.2, ss, 0.0, 2 * PI / G0, 41)
    rep = compare_with_oracle(traj, n)
    assert rep["min_fidelity"] >= 1 - 1e-6
    assert rep["max_global_phase_gap"] <= 1e-6
    assert rep["max_imbalance_gap"] <= 1e-6
    for i in range(0, traj.t.size, 10):
        lhs, rhs = uncertainty_product(BlochState(n, float(traj.r[i]), float(traj.phi[i])),
                                       rep["oracle_states"][i])
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_non_exact_regime_is_reported_not_hidden():
    ss = ss_on(gamma_a=G0 / 5, gamma_b=G0 / 20, gamma_ab=0.0)
    rep = compare_with_oracle(solve(PI / 3, 0.2, ss, 0.0, 4 * PI / G0, 41), 8)
    assert rep["min_fidelity"] < 1 - 1e-6
