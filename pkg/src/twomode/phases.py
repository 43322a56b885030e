"""Total, dynamical and geometric phases of an evolving Bloch state.

For the state exp(-i N phi_N) |r(t), phi(t)>:

    phi_T = arg <psi(t0)|psi(t)>
    phi_D = -N [phi_N(t) - phi_N(t0)] + N/2 int dphi/dt (1 - cos r)
    phi_G = N arg{cos(r0/2) cos(r/2) + e^{+i(phi - phi0)} sin(r0/2) sin(r/2)}
            - N/2 int dphi/dt (1 - cos r)

The arg is a principal value. Its discontinuities are counted in
``winding`` and removed in ``phi_G_unwrapped``.

Along a solution of the characteristic equations,
dphi/dt (1 - cos r) = omega (1 - cos r) + 2 g cos r tan(r/2) cos chi, which is
regular except on the south pole, so the quadratures use that form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .characteristic import Trajectory, off_resonant_eta, resample
from .schedules import cumulative_integral, eval_trap

EPS_UNDEFINED = 1e-9
SOUTH_POLE_EPS = 1e-12
JUMP_THRESHOLD = math.pi / 2

__all__ = [
    "PhaseRecord",
    "GlobalPhaseState",
    "global_phase",
    "connection_integral",
    "total_phase",
    "dynamical_phase",
    "geometric_phase",
    "compute_phases",
    "geometric_phase_const_r",
    "geometric_phase_on_res",
    "geometric_phase_off_res",
    "kinematic_phases",
    "locate_jumps",
    "wrap",
]


def wrap(a):
    """Map angles into (-pi, pi]."""
    a = np.asarray(a, dtype=float)
    out = np.mod(a + math.pi, 2 * math.pi) - math.pi
    return np.where(out == -math.pi, math.pi, out)


@dataclass(frozen=True)
class PhaseRecord:
    """Phases sampled along a trajectory (all arrays share the time axis)."""

    t: Optional[np.ndarray]
    phi_T: Optional[np.ndarray]
    phi_D: Optional[np.ndarray]
    phi_G: np.ndarray
    winding: np.ndarray
    defined: np.ndarray
    phi_G_unwrapped: np.ndarray


@dataclass(frozen=True)
class GlobalPhaseState:
    phi_N: np.ndarray
    effective_mode_frequency: np.ndarray
    singular: np.ndarray


def _ratio(x, P):
    """tan(r/2) cos chi = P / (1 + x), zero where the south pole makes it 0/0."""
    den = 1.0 + x
    safe = den > SOUTH_POLE_EPS
    return np.where(safe, P / np.where(safe, den, 1.0), 0.0), ~safe


def _pole_jumps(traj: Trajectory) -> np.ndarray:
    """Jumps of chi across the south pole, attributed to the interval they occur in.

    On the south pole the Fock state carries e^{i N phi}, so a jump of phi there
    must be matched by phi_N and weighs twice in the connection integral.
    """
    dchi = np.diff(traj.chi)
    near = (1.0 + traj.x[:-1] < 0.05) & (1.0 + traj.x[1:] < 0.05)
    return np.where(near & (np.abs(dchi) > JUMP_THRESHOLD), dchi, 0.0)


def _spline_parts(traj: Trajectory):
    phi = CubicSpline(traj.t, traj.phi)
    x = CubicSpline(traj.t, traj.x)
    P = CubicSpline(traj.t, traj.P)
    return phi, x, P


def global_phase(traj: Trajectory, n_atoms: int) -> GlobalPhaseState:
    """phi_N(t) from the effective mode-a frequency plus the elastic collision block."""
    ss = traj.schedules
    lam = ss.collision_imbalance
    n1 = n_atoms - 1

    if traj.evaluator is not None:
        ev = traj.evaluator
    else:
        _, xs, Ps = _spline_parts(traj)

        def ev(tt):
            return xs(tt), Ps(tt)

    def integrand(tt):
        x, P = ev(tt)
        ratio, _ = _ratio(x, P)
        wa_eff = eval_trap(ss.omega_a, tt) - eval_trap(ss.rabi, tt) * ratio
        coll = ss.gamma_a * (1 + x) / 2 + ss.gamma_b * (1 - x) / 2 - lam / 4 * (1 - x * x)
        return wa_eff + n1 * coll

    phi_n = cumulative_integral(integrand, traj.t)
    phi_n = phi_n + np.concatenate([[0.0], np.cumsum(_pole_jumps(traj))])
    ratio, singular = _ratio(traj.x, traj.P)
    wa_eff = eval_trap(ss.omega_a, traj.t) - eval_trap(ss.rabi, traj.t) * ratio
    return GlobalPhaseState(phi_n, np.asarray(wa_eff, dtype=float), singular)


def connection_integral(traj: Trajectory) -> np.ndarray:
    """int_{t0}^{t} dphi/dtau (1 - cos r) dtau at every sample."""
    ss = traj.schedules
    if traj.evaluator is not None:
        ev = traj.evaluator

        def integrand(tt):
            x, P = ev(tt)
            ratio, _ = _ratio(x, P)
            w = eval_trap(ss.omega_a, tt) - eval_trap(ss.omega_b, tt)
            return w * (1 - x) + 2 * eval_trap(ss.rabi, tt) * x * ratio

        out = cumulative_integral(integrand, traj.t)
        return out + 2 * np.concatenate([[0.0], np.cumsum(_pole_jumps(traj))])
    phi, xs, _ = _spline_parts(traj)
    dphi = phi.derivative()
    return cumulative_integral(lambda tt: dphi(tt) * (1 - xs(tt)), traj.t, tol=1e-12)


def _half_angles(x):
    x = np.clip(x, -1.0, 1.0)
    return np.sqrt((1 + x) / 2), np.sqrt((1 - x) / 2)


def _single_overlap(traj: Trajectory) -> np.ndarray:
    c, s = _half_angles(traj.x)
    dphi = traj.phi - traj.phi[0]
    return c[0] * c + np.exp(1j * dphi) * s[0] * s


def _record_from_arg(single: np.ndarray, n_atoms: int, conn: np.ndarray, t=None,
                     phi_T=None, phi_D=None) -> PhaseRecord:
    arg_p = np.angle(single)
    defined = np.abs(single) >= EPS_UNDEFINED
    # jumps are measured between consecutive defined samples only; an
    # undefined sample has no meaningful arg
    idx = np.flatnonzero(defined)
    cum = np.zeros(arg_p.size)
    winding = np.zeros(arg_p.size, dtype=int)
    if idx.size > 1:
        steps = np.diff(arg_p[idx])
        # remove only the discontinuity (a multiple of pi), not the smooth
        # change that happens within the same sample interval
        steps = np.where(np.abs(steps) > JUMP_THRESHOLD, np.round(steps / math.pi) * math.pi, 0.0)
        at = np.zeros(arg_p.size)
        turns = np.zeros(arg_p.size, dtype=int)
        at[idx[1:]] = steps
        turns[idx[1:]] = -np.sign(steps).astype(int)
        cum = np.cumsum(at)
        winding = np.cumsum(turns)
    return PhaseRecord(
        t=t, phi_T=phi_T, phi_D=phi_D, phi_G=n_atoms * arg_p - n_atoms / 2 * conn,
        winding=winding, defined=defined,
        phi_G_unwrapped=n_atoms * (arg_p - cum) - n_atoms / 2 * conn,
    )


def total_phase(traj: Trajectory, n_atoms: int, gp: GlobalPhaseState | None = None) -> np.ndarray:
    """arg <psi(t0)|psi(t)> as a principal value."""
    if gp is None:
        gp = global_phase(traj, n_atoms)
    single = _single_overlap(traj)
    return wrap(n_atoms * np.angle(single) - n_atoms * (gp.phi_N - gp.phi_N[0]))


def dynamical_phase(traj: Trajectory, n_atoms: int, gp: GlobalPhaseState | None = None,
                    conn: np.ndarray | None = None) -> np.ndarray:
    if gp is None:
        gp = global_phase(traj, n_atoms)
    if conn is None:
        conn = connection_integral(traj)
    return -n_atoms * (gp.phi_N - gp.phi_N[0]) + n_atoms / 2 * conn


def geometric_phase(traj: Trajectory, n_atoms: int, conn: np.ndarray | None = None) -> PhaseRecord:
    if conn is None:
        conn = connection_integral(traj)
    return _record_from_arg(_single_overlap(traj), n_atoms, conn, t=traj.t)


def compute_phases(traj: Trajectory, n_atoms: int) -> PhaseRecord:
    """All three phases in one pass (shares the two quadratures)."""
    gp = global_phase(traj, n_atoms)
    conn = connection_integral(traj)
    single = _single_overlap(traj)
    phi_t = wrap(n_atoms * np.angle(single) - n_atoms * (gp.phi_N - gp.phi_N[0]))
    phi_d = -n_atoms * (gp.phi_N - gp.phi_N[0]) + n_atoms / 2 * conn
    return _record_from_arg(single, n_atoms, conn, t=traj.t, phi_T=phi_t, phi_D=phi_d)


def geometric_phase_const_r(r: float, dphi, n_atoms: int) -> PhaseRecord:
    """Uncoupled case: N{arg[cos^2(r/2) + e^{i dphi} sin^2(r/2)] - (1 - cos r) dphi / 2}.

    The exponent carries the same sign as the general formula, so this is
    exactly its specialisation to constant r.
    """
    dphi = np.atleast_1d(np.asarray(dphi, dtype=float))
    single = math.cos(r / 2) ** 2 + np.exp(1j * dphi) * math.sin(r / 2) ** 2
    return _record_from_arg(single, n_atoms, (1 - math.cos(r)) * dphi)


def _specialised(traj: Trajectory, n_atoms: int, integrand) -> PhaseRecord:
    if traj.evaluator is None:
        raise ValueError("specialised geometric phase needs a trajectory with an evaluator")
    conn = cumulative_integral(integrand, traj.t)
    return _record_from_arg(_single_overlap(traj), n_atoms, conn, t=traj.t)


def geometric_phase_on_res(traj: Trajectory, n_atoms: int) -> PhaseRecord:
    """On-resonant form: integrand omega (1 - cos r) + 2 C g cos r / (1 + cos r)."""
    ss = traj.schedules
    C = traj.constant.value

    def integrand(tt):
        x, _ = traj.evaluator(tt)
        den = 1 + x
        safe = den > SOUTH_POLE_EPS
        frac = np.where(safe, x / np.where(safe, den, 1.0), 0.0)
        w = eval_trap(ss.omega_a, tt) - eval_trap(ss.omega_b, tt)
        return w * (1 - x) + 2 * C * eval_trap(ss.rabi, tt) * frac

    return _specialised(traj, n_atoms, integrand)


def geometric_phase_off_res(traj: Trajectory, n_atoms: int) -> PhaseRecord:
    """Off-resonant form: integrand omega (1 - cos r) + varpi cos r (C + cos r) / (1 + cos r)."""
    ss = traj.schedules
    C = traj.constant.value
    varpi = ss.regime.rotating_frame_detuning
    off_resonant_eta(ss)

    def integrand(tt):
        x, _ = traj.evaluator(tt)
        den = 1 + x
        safe = den > SOUTH_POLE_EPS
        frac = np.where(safe, (C + x) / np.where(safe, den, 1.0), 0.0)
        w = eval_trap(ss.omega_a, tt) - eval_trap(ss.omega_b, tt)
        return w * (1 - x) + varpi * x * frac

    return _specialised(traj, n_atoms, integrand)


def kinematic_phases(states: np.ndarray):
    """Phases of a sampled state path straight from Fock vectors.

    phi_T = arg <psi_0|psi_k>, phi_D = sum_j arg <psi_j|psi_{j+1}> (the
    discrete form of Im int <psi|d psi>), and phi_G from the Bargmann
    invariant arg(<psi_0|psi_k> prod_j <psi_{j+1}|psi_j>), which is exactly
    independent of per-sample phase choices.
    """
    states = np.asarray(states, dtype=complex)
    links = np.einsum("ij,ij->i", states[:-1].conj(), states[1:])
    to_start = states @ states[0].conj()
    phi_t = np.angle(to_start)
    phi_d = np.concatenate([[0.0], np.cumsum(np.angle(links))])
    return phi_t, phi_d, wrap(phi_t - phi_d)


def _jump_pairs(single: np.ndarray) -> list[tuple[int, int]]:
    """(a, b) pairs of consecutive defined samples across which the principal arg jumps."""
    idx = np.flatnonzero(np.abs(single) >= EPS_UNDEFINED)
    arg_p = np.angle(single[idx])
    hit = np.flatnonzero(np.abs(np.diff(arg_p)) > JUMP_THRESHOLD)
    return [(int(idx[h]), int(idx[h + 1])) for h in hit]


def locate_jumps(traj: Trajectory, levels: int = 3, points: int = 65) -> np.ndarray:
    """Times of the principal-value discontinuities of phi_G.

    Each jump seen on the sample grid is bracketed more tightly by
    resampling the same solution on ``points`` sub-samples, ``levels``
    times over, so the location error is about dt / (points - 1)**levels.
    """
    out = []
    for a, b in _jump_pairs(_single_overlap(traj)):
        lo, hi = float(traj.t[a]), float(traj.t[b])
        for _ in range(levels):
            grid = np.linspace(lo, hi, points)
            head = [] if lo == traj.t0 else [traj.t0]
            sub = _single_overlap(resample(traj, np.concatenate([head, grid])))[len(head):]
            pairs = _jump_pairs(sub)
            if not pairs:
                break
            lo, hi = float(grid[pairs[0][0]]), float(grid[pairs[0][1]])
        out.append(0.5 * (lo + hi))
    return np.array(out)
