"""Exact propagation of the two-mode Hamiltonian in the (N+1)-dimensional Fock space.

This is the independent reference for the analytic pipeline: it never uses
the characteristic equations. The detuning phase delta(t) comes from the
exact antiderivatives of the harmonic schedules rather than from the
quadrature used elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blochstate import BlochState, bloch_to_fock
from .schedules import ScheduleSet, eval_trap

__all__ = [
    "PropagatorConfig",
    "NonConvergenceError",
    "fock_operators",
    "oracle_delta",
    "build_full_hamiltonian",
    "build_transformed_hamiltonian",
    "propagate",
    "predicted_state",
    "predicted_states",
    "compare_with_oracle",
]


class NonConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PropagatorConfig:
    """``step`` is the initial step (None picks one from the parameter scales)."""

    step: float | None = None
    scheme: str = "magnus4"
    max_steps: int = 2_000_000
    tol: float = 1e-9

    def __post_init__(self):
        if self.scheme not in ("magnus4", "midpoint"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True)
class _Ops:
    a: np.ndarray
    b: np.ndarray
    index: np.ndarray

    def project(self, op: np.ndarray) -> np.ndarray:
        return op[np.ix_(self.index, self.index)]


def fock_operators(n: int) -> _Ops:
    """Mode operators on the truncated product space, plus the N-atom subspace index.

    Only normal-ordered products are projected, so the cutoff at n quanta per
    mode is never felt.
    """
    lower = np.diag(np.sqrt(np.arange(1, n + 1, dtype=float)), 1)
    eye = np.eye(n + 1)
    a = np.kron(lower, eye)
    b = np.kron(eye, lower)
    k = np.arange(n + 1)
    index = (n - k) * (n + 1) + k
    return _Ops(a.astype(complex), b.astype(complex), index)


def oracle_delta(ss: ScheduleSet, t0: float, t) -> np.ndarray | float:
    """delta(t) from the exact schedule antiderivatives."""
    kind = ss.regime.kind
    if kind == "on_resonant":
        rise = ss.omega_a.integral(t0, t) - ss.omega_b.integral(t0, t)
    elif kind == "off_resonant":
        rise = ss.omega_a.integral(t0, t) - ss.omega_b.integral(t0, t) - ss.regime.varpi * (np.asarray(t) - t0)
    else:
        rise = 0.0 * np.asarray(t, dtype=float)
    return ss.delta0 + rise


class _Builder:
    """Caches the projected operator pieces for one atom number."""

    def __init__(self, n: int):
        ops = fock_operators(n)
        a, b = ops.a, ops.b
        ad, bd = a.conj().T, b.conj().T
        self.n = n
        self.na = ops.project(ad @ a).real.diagonal().copy()
        self.nb = ops.project(bd @ b).real.diagonal().copy()
        self.aa = ops.project(ad @ ad @ a @ a).real.diagonal().copy()
        self.bb = ops.project(bd @ bd @ b @ b).real.diagonal().copy()
        self.nanb = self.na * self.nb
        self.adb = ops.project(ad @ b)
        self.inel1 = ops.project(ad @ ad @ a @ b)
        self.inel2 = ops.project(ad @ bd @ b @ b)
        self.inel3 = ops.project(ad @ ad @ b @ b)

    def full(self, ss: ScheduleSet, t: float, delta: float) -> np.ndarray:
        wa, wb = eval_trap(ss.omega_a, t), eval_trap(ss.omega_b, t)
        g = eval_trap(ss.rabi, t)
        diag = wa * self.na + wb * self.nb + ss.gamma_a * self.aa + ss.gamma_b * self.bb + ss.gamma_ab * self.nanb
        hop = -g * np.exp(-1j * delta) * self.adb
        return np.diag(diag).astype(complex) + hop + hop.conj().T


_BUILDERS: dict[int, _Builder] = {}


def _builder(n: int) -> _Builder:
    if n not in _BUILDERS:
        _BUILDERS[n] = _Builder(n)
    return _BUILDERS[n]


def build_full_hamiltonian(ss: ScheduleSet, n: int, t: float, t0: float = 0.0,
                           delta: float | None = None) -> np.ndarray:
    """H(t) in the |N_a, N_b> basis (index k <-> N_b = k)."""
    if delta is None:
        delta = float(oracle_delta(ss, t0, t))
    return _builder(n).full(ss, t, delta)


def build_transformed_hamiltonian(ss: ScheduleSet, n: int, t: float, r: float, phi: float,
                                  t0: float = 0.0, delta: float | None = None):
    """The three pieces of the rotated Hamiltonian: (sum w~_l n_l, H_el, H_inel)."""
    if delta is None:
        delta = float(oracle_delta(ss, t0, t))
    bd = _builder(n)
    g = eval_trap(ss.rabi, t)
    shift = g * math.cos(phi - delta) * math.tan(r / 2)
    wa_eff = eval_trap(ss.omega_a, t) - shift
    wb_eff = eval_trap(ss.omega_b, t) + shift
    diag = np.diag(wa_eff * bd.na + wb_eff * bd.nb).astype(complex)

    ga, gb, gab, lam = ss.gamma_a, ss.gamma_b, ss.gamma_ab, ss.collision_imbalance
    c2, s2 = math.cos(r / 2) ** 2, math.sin(r / 2) ** 2
    sr2 = math.sin(r) ** 2
    h_el = np.diag((ga * c2 + gb * s2 - lam / 4 * sr2) * bd.aa
                   + (ga * s2 + gb * c2 - lam / 4 * sr2) * bd.bb
                   + (gab + lam * sr2) * bd.nanb).astype(complex)

    ph = np.exp(-1j * phi)
    half_diff = (gb - ga) / 2 * math.sin(r)
    quarter = lam / 4 * math.sin(2 * r)
    up = ((half_diff - quarter) * ph * bd.inel1
          + (half_diff + quarter) * ph * bd.inel2
          + lam / 4 * sr2 * ph**2 * bd.inel3)
    h_inel = up + up.conj().T
    return diag, h_el, h_inel


def _unitary_from_hermitian(k: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(k)
    return (v * np.exp(-1j * w)) @ v.conj().T


_GL2 = (0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6)


def _step(bd: _Builder, ss: ScheduleSet, t0: float, t: float, h: float, scheme: str) -> np.ndarray:
    if scheme == "midpoint":
        tm = t + h / 2
        return _unitary_from_hermitian(h * bd.full(ss, tm, float(oracle_delta(ss, t0, tm))))
    ta, tb = t + _GL2[0] * h, t + _GL2[1] * h
    h1 = bd.full(ss, ta, float(oracle_delta(ss, t0, ta)))
    h2 = bd.full(ss, tb, float(oracle_delta(ss, t0, tb)))
    # fourth-order Magnus for psi' = -iH psi: Omega = -i herm with
    # herm = h (H1+H2)/2 + i sqrt(3) h^2 / 12 [H1, H2]
    comm = h1 @ h2 - h2 @ h1
    herm = h * (h1 + h2) / 2 + 1j * math.sqrt(3) * h * h / 12 * comm
    return _unitary_from_hermitian(herm)


def _run(psi0, ss, bd, t0, times, h, factor, scheme):
    out = np.empty((times.size, psi0.size), dtype=complex)
    psi = psi0.astype(complex).copy()
    t = t0
    for i, target in enumerate(times):
        span = target - t
        if span > 0:
            m = max(1, math.ceil(span / h - 1e-9)) * factor
            hh = span / m
            for j in range(m):
                psi = _step(bd, ss, t0, t + j * hh, hh, scheme) @ psi
            t = target
        out[i] = psi
    return out


def propagate(psi0: np.ndarray, ss: ScheduleSet, n: int, t0: float, times, cfg: PropagatorConfig | None = None):
    """Fock states at ``times`` (non-decreasing, >= t0), with step halving to ``cfg.tol``."""
    cfg = cfg or PropagatorConfig()
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.size != n + 1:
        raise ValueError("state dimension does not match atom number")
    if abs(np.linalg.norm(psi0) - 1) > 1e-10:
        raise ValueError("initial state must be normalised")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) < 0) or np.any(times < t0):
        raise ValueError("times must be sorted and not before t0")
    bd = _builder(n)
    span = float(times[-1] - t0)
    if span == 0:
        return np.repeat(psi0[None, :], times.size, axis=0)
    h = cfg.step
    if h is None:
        scale = (abs(ss.omega_a.base) + abs(ss.omega_a.mod_amp) + abs(ss.omega_b.base) + abs(ss.omega_b.mod_amp)
                 + 2 * (abs(ss.rabi.base) + abs(ss.rabi.mod_amp))
                 + n * (abs(ss.gamma_a) + abs(ss.gamma_b) + abs(ss.gamma_ab)) + 1e-300)
        h = min(span, 0.2 / scale)
    base_steps = sum(max(1, math.ceil(s / h - 1e-9)) for s in np.diff(np.concatenate([[t0], times])) if s > 0)
    factor = 1
    coarse = _run(psi0, ss, bd, t0, times, h, factor, cfg.scheme)
    while True:
        factor *= 2
        if base_steps * factor > cfg.max_steps:
            raise NonConvergenceError(f"step halving exceeded {cfg.max_steps} steps")
        fine = _run(psi0, ss, bd, t0, times, h, factor, cfg.scheme)
        err = np.abs(fine - coarse).max()
        if err < cfg.tol:
            return fine
        coarse = fine


def predicted_state(r: float, phi: float, phi_n: float, n: int) -> np.ndarray:
    """e^{-i N phi_N} |r, phi> as Fock amplitudes."""
    return bloch_to_fock(BlochState(n, float(r), float(phi), n * float(phi_n)))


def predicted_states(traj, phi_n: np.ndarray, n: int) -> np.ndarray:
    r, phi = traj.r, traj.phi
    return np.array([predicted_state(r[i], phi[i], phi_n[i], n) for i in range(r.size)])


def compare_with_oracle(traj, n: int, cfg: PropagatorConfig | None = None,
                        phase_floor: float = 1e-3) -> dict:
    """Fidelity, phase and observable gaps between the analytic pipeline and the propagator.

    Exact agreement is expected only for N = 1 or for Lambda = 0 with
    gamma_a = gamma_b; elsewhere the numbers measure the error of dropping
    the inelastic terms.
    """
    from .blochstate import angular_momentum_ops
    from .phases import compute_phases, global_phase, wrap

    gp = global_phase(traj, n)
    pred = predicted_states(traj, gp.phi_N, n)
    prop = propagate(pred[0], traj.schedules, n, traj.t0, traj.t, cfg)
    inner = np.einsum("ij,ij->i", pred.conj(), prop)
    fidelity = np.abs(inner) ** 2
    rec = compute_phases(traj, n)
    oracle_total = np.angle(prop @ prop[0].conj())
    big = np.abs(prop @ prop[0].conj()) > phase_floor
    _, _, jz = angular_momentum_ops(n)
    imb = 2 * np.real(np.einsum("ij,jk,ik->i", prop.conj(), jz, prop))
    return {
        "min_fidelity": float(fidelity.min()),
        "max_global_phase_gap": float(np.abs(np.angle(inner)).max()),
        "max_total_phase_gap": float(np.abs(wrap(oracle_total[big] - rec.phi_T[big])).max()) if big.any() else 0.0,
        "max_imbalance_gap": float(np.abs(imb - n * traj.x).max()),
        "max_norm_drift": float(np.abs(np.linalg.norm(prop, axis=1) - 1).max()),
        "fidelity": fidelity,
        "oracle_states": prop,
        "predicted_states": pred,
    }
