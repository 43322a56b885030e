"""Solutions of the characteristic equations for the rotation angles r(t), phi(t).

The equations are

    dr/dt   = 2 g sin(phi - delta)
    dphi/dt = omega + 2 g cot(r) cos(phi - delta)

Closed forms exist in the on-resonant, off-resonant and constant-r regimes;
:func:`integrate_characteristic` solves the same problem numerically through
the equivalent precession of the unit Bloch vector, which has no pole at
r = 0, pi.

Internally every trajectory is stored in the frame co-rotating with delta:
``x = cos r``, ``P = sin r cos chi`` and ``Q = sin r sin chi`` with
``chi = phi - delta``. These three numbers form a unit vector, so the
angular coordinates never need an arccos near the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .regimes import Regime
from .schedules import IntegrationError, ScheduleSet, detuning_phase, detuning_rate, eval_trap

POLE_EPS = 1e-13

__all__ = [
    "AngleState",
    "MotionConstant",
    "Trajectory",
    "InconsistentInputsError",
    "motion_constant",
    "closed_form_on_resonant",
    "closed_form_off_resonant",
    "constant_r_solution",
    "integrate_characteristic",
    "solve",
    "portrait_surface",
    "off_resonant_eta",
    "resample",
]


class InconsistentInputsError(ValueError):
    """The closed form was asked for a state its constant of motion cannot reach."""


@dataclass(frozen=True)
class AngleState:
    r: float
    phi: float
    chi: float


@dataclass(frozen=True)
class MotionConstant:
    value: float
    regime: Regime
    eta: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-ordered samples of a solution of the characteristic equations.

    ``evaluator`` (when present) maps an array of times to ``(x, P)`` and is
    what the phase quadratures integrate; sample arrays alone are enough for
    everything else.
    """

    t: np.ndarray
    x: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    chi: np.ndarray
    delta: np.ndarray
    schedules: ScheduleSet
    t0: float
    method: str
    constant: Optional[MotionConstant] = None
    evaluator: Optional[Callable[[np.ndarray], tuple]] = field(default=None, repr=False)

    def __len__(self):
        return self.t.size

    @property
    def regime(self) -> Regime:
        return self.schedules.regime

    @property
    def sin_r(self) -> np.ndarray:
        return np.hypot(self.P, self.Q)

    @property
    def r(self) -> np.ndarray:
        return np.arctan2(self.sin_r, self.x)

    @property
    def phi(self) -> np.ndarray:
        """Unwrapped relative phase phi = chi + delta."""
        return self.chi + self.delta

    @property
    def bloch_vector(self) -> np.ndarray:
        """Lab-frame unit vector, shape (n, 3)."""
        c, s = np.cos(self.delta), np.sin(self.delta)
        nx = self.P * c - self.Q * s
        ny = self.P * s + self.Q * c
        return np.column_stack([nx, ny, self.x])

    def state(self, i: int) -> AngleState:
        return AngleState(float(self.r[i]), float(self.phi[i]), float(self.chi[i]))

    def constant_values(self) -> np.ndarray:
        """The regime's conserved quantity evaluated at every sample."""
        kind = self.regime.kind
        if kind in ("on_resonant", "external_symmetric"):
            return self.P.copy()
        if kind in ("off_resonant", "external_asymmetric"):
            eta = off_resonant_eta(self.schedules)
            return eta * self.P - self.x
        return self.x.copy()

    def constant_drift(self) -> np.ndarray:
        c = self.constant_values()
        return np.abs(c - c[0])


def off_resonant_eta(ss: ScheduleSet) -> float:
    """eta = 2 g0 / varpi (or 2 g0 / omega for asymmetric wells)."""
    varpi = ss.regime.rotating_frame_detuning
    if varpi == 0:
        raise ValueError("eta is only defined for the off-resonant family")
    return 2 * ss.rabi.base / varpi


def motion_constant(r0: float, phi0: float, delta0: float, regime: Regime,
                    g0: float | None = None) -> MotionConstant:
    """Conserved quantity labelling the level curve through (r0, phi0 - delta0).

    On resonance ``sin r cos chi``; off resonance ``eta sin r cos chi - cos r``
    with eta = 2 g0 / varpi, so ``g0`` is required there.
    """
    if not 0.0 <= r0 <= math.pi:
        raise ValueError("r0 must lie in [0, pi]")
    chi0 = phi0 - delta0
    if regime.kind in ("on_resonant", "external_symmetric"):
        return MotionConstant(math.sin(r0) * math.cos(chi0), regime)
    if regime.uses_off_resonant_solution:
        if g0 is None:
            raise ValueError("off-resonant constant needs g0")
        eta = 2 * g0 / regime.rotating_frame_detuning
        return MotionConstant(eta * math.sin(r0) * math.cos(chi0) - math.cos(r0), regime, eta)
    return MotionConstant(math.cos(r0), regime)


def portrait_surface(regime: Regime, r, chi, eta: float | None = None) -> np.ndarray:
    """Constant-of-motion surface C(r, chi) for level-curve plots."""
    r = np.asarray(r, dtype=float)
    chi = np.asarray(chi, dtype=float)
    if regime.kind in ("on_resonant", "external_symmetric"):
        return np.sin(r) * np.cos(chi)
    if regime.uses_off_resonant_solution:
        if eta is None:
            raise ValueError("off-resonant portrait needs eta")
        return eta * np.sin(r) * np.cos(chi) - np.cos(r)
    return np.cos(r) + 0.0 * chi


def _continuous_chi(P, Q, chi0: float) -> np.ndarray:
    """Continuous azimuth of (P, Q), anchored to the branch of ``chi0``.

    Samples sitting on a pole carry no azimuth; they inherit the previous
    value (or chi0 before the first regular sample).
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    ang = np.arctan2(Q, P)
    regular = np.hypot(P, Q) > POLE_EPS
    if not regular.any():
        return np.full(P.shape, chi0)
    idx = np.where(regular, np.arange(P.size), 0)
    np.maximum.accumulate(idx, out=idx)
    first = int(np.argmax(regular))
    ang = np.where(regular, ang, ang[idx])
    ang = np.unwrap(ang)
    ang = ang + 2 * math.pi * round((chi0 - ang[first]) / (2 * math.pi))
    ang[:first] = chi0
    return ang


def _time_grid(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.ndim != 1:
        raise ValueError("time samples must be one-dimensional")
    return t


def _delta_samples(ss: ScheduleSet, t0: float, t: np.ndarray) -> np.ndarray:
    return np.asarray(detuning_phase(ss, t0, t), dtype=float)


def _finish(t, t0, x, P, Q, chi0, ss, method, constant, evaluator, chi=None):
    if chi is None:
        chi = _continuous_chi(P, Q, chi0)
    at_start = t == t0
    chi = np.where(at_start, chi0, chi)
    delta = _delta_samples(ss, t0, t)
    return Trajectory(t=t, x=x, P=P, Q=Q, chi=chi, delta=delta, schedules=ss, t0=t0,
                      method=method, constant=constant, evaluator=evaluator)


def closed_form_on_resonant(t, r0: float, phi0: float, ss: ScheduleSet, t0: float = 0.0) -> Trajectory:
    """Resonant solution with arbitrary g(t).

    cos r(t) = sqrt(1 - C^2) sin(u + a) with u = -2 int g. The textbook form
    takes a = arcsin(cos r0 / sqrt(1 - C^2)), which is only right when
    dr/dt >= 0 at t0; using the quadrant-aware angle of (cos r0, sin r0 sin chi0)
    makes the same expression valid for either sign. The azimuth follows from
    sin r e^{i chi} = C + i sqrt(1 - C^2) cos(u + a), which fixes the arccos
    branch continuously.

    r0 = pi with C = 0 follows the constraint route: chi is held at chi0 and r
    moves along one meridian inside [0, pi].
    """
    if ss.regime.kind not in ("on_resonant", "external_symmetric"):
        raise ValueError(f"on-resonant closed form used with regime {ss.regime.kind}")
    if not 0.0 <= r0 <= math.pi:
        raise ValueError("r0 must lie in [0, pi]")
    t = _time_grid(t)
    chi0 = phi0 - ss.delta0
    const = motion_constant(r0, phi0, ss.delta0, ss.regime)
    C = const.value
    x0 = math.cos(r0)
    Q0 = math.sin(r0) * math.sin(chi0)
    amp = math.sqrt(max(1.0 - C * C, 0.0))
    rabi = ss.rabi

    if amp < POLE_EPS:
        # |C| = 1: r stays at pi/2 and chi is frozen
        def evaluator(tt):
            tt = np.asarray(tt, dtype=float)
            return np.zeros_like(tt), np.full_like(tt, C)

        n = t.size
        return _finish(t, t0, np.zeros(n), np.full(n, C), np.zeros(n), chi0, ss,
                       "closed_on_resonant", const, evaluator, chi=np.full(n, chi0))

    a = math.atan2(x0 / amp, Q0 / amp)
    constrained = abs(C) < POLE_EPS and abs(1.0 + x0) < POLE_EPS

    def x_of(tt):
        u = -2.0 * rabi.integral(t0, tt)
        return amp * np.sin(u + a), amp * np.cos(u + a)

    if constrained:
        def evaluator(tt):
            x, _ = x_of(tt)
            return x, np.sqrt(np.clip(1 - x * x, 0, None)) * math.cos(chi0)

        x, _ = x_of(t)
        sin_r = np.sqrt(np.clip(1 - x * x, 0, None))
        P = sin_r * math.cos(chi0)
        Q = sin_r * math.sin(chi0)
        return _finish(t, t0, x, P, Q, chi0, ss, "closed_on_resonant", const, evaluator,
                       chi=np.full(t.size, chi0))

    def evaluator(tt):
        x, _ = x_of(tt)
        return x, np.full_like(x, C)

    x, Q = x_of(t)
    P = np.full_like(x, C)
    return _finish(t, t0, x, P, Q, chi0, ss, "closed_on_resonant", const, evaluator)


def closed_form_off_resonant(t, r0: float, phi0: float, ss: ScheduleSet, t0: float = 0.0) -> Trajectory:
    """Off-resonant solution (constant g0, Delta = omega - varpi).

    With eta = 2 g0 / varpi and s = sqrt(1 + eta^2) the rotating-frame vector
    precesses about (-eta, 0, 1) at rate varpi * s:

        cos r     = -C/(1+eta^2) + eta K sin(theta)
        sin r cos chi = eta C/(1+eta^2) + K sin(theta)
        sin r sin chi = s K cos(theta)

    where K = sqrt(1 + eta^2 - C^2)/(1 + eta^2) and theta = theta0 - varpi s (t - t0).
    The first line is the standard cos r solution; the last two resolve the
    arccos in the phi solution onto the continuous branch.
    """
    if not ss.regime.uses_off_resonant_solution:
        raise ValueError(f"off-resonant closed form used with regime {ss.regime.kind}")
    if not ss.rabi.is_constant:
        raise ValueError("off-resonant closed form requires a constant Rabi frequency")
    if not 0.0 <= r0 <= math.pi:
        raise ValueError("r0 must lie in [0, pi]")
    t = _time_grid(t)
    varpi = ss.regime.rotating_frame_detuning
    eta = 2 * ss.rabi.base / varpi
    chi0 = phi0 - ss.delta0
    const = motion_constant(r0, phi0, ss.delta0, ss.regime, g0=ss.rabi.base)
    C = const.value
    e2 = 1.0 + eta * eta
    s = math.sqrt(e2)
    x0, P0, Q0 = math.cos(r0), math.sin(r0) * math.cos(chi0), math.sin(r0) * math.sin(chi0)
    # on the unit sphere 1 + eta^2 - C^2 = (eta x0 + P0)^2 + (1 + eta^2) Q0^2 and
    # the arcsin argument (e2 x0 + C) / (eta sqrt(rad)) = (eta x0 + P0) / sqrt(rad);
    # both forms avoid the cancellation of the textbook expressions
    lead = eta * x0 + P0
    rad = lead * lead + e2 * Q0 * Q0
    if abs(e2 - C * C - rad) > 1e-9 * e2:
        raise InconsistentInputsError(f"1 + eta^2 - C^2 = {e2 - C * C:g} disagrees with the initial state")
    K = math.sqrt(rad) / e2
    if rad > 0:
        arg = lead / math.sqrt(rad)
        if abs(arg) > 1 + 1e-12:
            raise InconsistentInputsError(f"arcsin argument {arg!r} outside [-1, 1]")

    if K < POLE_EPS:
        theta0 = 0.0
    else:
        theta0 = math.atan2((P0 - eta * C / e2) / K, Q0 / (s * K))

    def parts(tt):
        th = theta0 - varpi * s * (np.asarray(tt, dtype=float) - t0)
        sn = np.sin(th)
        return -C / e2 + eta * K * sn, eta * C / e2 + K * sn, s * K * np.cos(th)

    def evaluator(tt):
        x, P, _ = parts(tt)
        return x, P

    x, P, Q = parts(t)
    return _finish(t, t0, x, P, Q, chi0, ss, "closed_off_resonant", const, evaluator)


def constant_r_solution(t, r0: float, phi0: float, ss: ScheduleSet, t0: float = 0.0) -> Trajectory:
    """Uncoupled solution: r = r0 and phi = phi0 + int omega."""
    if not (ss.rabi.base == 0.0 and ss.rabi.mod_amp == 0.0):
        raise ValueError("constant-r solution requires g = 0")
    if abs(math.sin(r0)) < POLE_EPS:
        raise ValueError("constant-r solution requires r0 != n pi")
    t = _time_grid(t)

    def phi_of(tt):
        return phi0 + ss.omega_a.integral(t0, tt) - ss.omega_b.integral(t0, tt)

    sr, cr = math.sin(r0), math.cos(r0)

    def evaluator(tt):
        p = phi_of(tt) - ss.delta0
        return np.full_like(p, cr), sr * np.cos(p)

    delta = _delta_samples(ss, t0, t)
    chi = phi_of(t) - delta
    chi = np.where(t == t0, phi0 - ss.delta0, chi)
    return Trajectory(t=t, x=np.full(t.size, cr), P=sr * np.cos(chi), Q=sr * np.sin(chi),
                      chi=chi, delta=delta, schedules=ss, t0=t0, method="closed_constant_r",
                      constant=motion_constant(r0, phi0, ss.delta0, ss.regime), evaluator=evaluator)


def _precession_rhs(ss: ScheduleSet):
    rabi, wa, wb = ss.rabi, ss.omega_a, ss.omega_b

    def rhs(t, y):
        nx, ny, nz, d = y
        g = eval_trap(rabi, t)
        w = eval_trap(wa, t) - eval_trap(wb, t)
        bx, by = -2 * g * math.cos(d), -2 * g * math.sin(d)
        return [by * nz - w * ny, w * nx - bx * nz, bx * ny - by * nx, detuning_rate(ss, t)]

    return rhs


def integrate_characteristic(r0: float, phi0: float, ss: ScheduleSet, t0: float, t1: float,
                             n_samples: int, regime: Regime | None = None,
                             rtol: float = 1e-10, atol: float = 1e-12, times=None) -> Trajectory:
    """Numerical solution through the Bloch-vector precession dn/dt = B x n.

    With B = (-2g cos delta, -2g sin delta, omega) this reproduces both
    characteristic equations away from the poles and stays regular on them.
    delta is carried as a fourth state component. Output vectors are
    renormalised at every sample. ``times`` replaces the uniform grid of
    ``n_samples`` points; it must start at t0 and end at t1.
    """
    if regime is not None and regime != ss.regime:
        ss = ScheduleSet(ss.omega_a, ss.omega_b, ss.rabi, regime, ss.delta0,
                         ss.gamma_a, ss.gamma_b, ss.gamma_ab)
    if not 0.0 <= r0 <= math.pi:
        raise ValueError("r0 must lie in [0, pi]")
    if ss.regime.kind.startswith("external") and ss.delta0 != 0:
        raise ValueError("external Josephson regimes require delta0 = 0")
    chi0 = phi0 - ss.delta0
    const = motion_constant(r0, phi0, ss.delta0, ss.regime, g0=ss.rabi.base)
    n0 = [math.sin(r0) * math.cos(phi0), math.sin(r0) * math.sin(phi0), math.cos(r0), ss.delta0]
    if times is not None:
        times = _time_grid(times)
        n_samples = times.size
        if times[0] != t0 or times[-1] != t1 or np.any(np.diff(times) <= 0):
            raise ValueError("times must increase strictly from t0 to t1")
    if n_samples < 1 or (t1 != t0 and n_samples < 2):
        raise ValueError("need at least two samples for a finite interval")
    if t1 == t0:
        t = np.array([t0])
        return Trajectory(t=t, x=np.array([n0[2]]), P=np.array([math.sin(r0) * math.cos(chi0)]),
                          Q=np.array([math.sin(r0) * math.sin(chi0)]), chi=np.array([chi0]),
                          delta=np.array([ss.delta0]), schedules=ss, t0=t0, method="numeric",
                          constant=const)
    t = times if times is not None else np.linspace(t0, t1, n_samples)
    sol = solve_ivp(_precession_rhs(ss), (t0, t1), n0, method="DOP853", t_eval=t,
                    rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise IntegrationError(sol.message)

    def rotate(y):
        n = y[:3] / np.linalg.norm(y[:3], axis=0)
        c, s = np.cos(y[3]), np.sin(y[3])
        return n[2], n[0] * c + n[1] * s, -n[0] * s + n[1] * c, y[3]

    x, P, Q, delta = rotate(sol.y)

    def evaluator(tt):
        xx, PP, _, _ = rotate(sol.sol(np.asarray(tt, dtype=float)))
        return xx, PP

    chi = _continuous_chi(P, Q, chi0)
    chi[0] = chi0
    delta = delta.copy()
    delta[0] = ss.delta0
    return Trajectory(t=t, x=x, P=P, Q=Q, chi=chi, delta=delta, schedules=ss, t0=t0,
                      method="numeric", constant=const, evaluator=evaluator)


def solve(r0: float, phi0: float, ss: ScheduleSet, t0: float, t1: float, n_samples: int,
          method: str = "closed_form", rtol: float = 1e-10) -> Trajectory:
    """Dispatch to the closed form of the schedule set's regime, or to the integrator.

    ``rtol`` only affects the integrator.
    """
    if method == "numeric":
        return integrate_characteristic(r0, phi0, ss, t0, t1, n_samples, rtol=rtol)
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    t = np.linspace(t0, t1, n_samples) if n_samples > 1 else np.array([t0])
    kind = ss.regime.kind
    if kind in ("on_resonant", "external_symmetric"):
        return closed_form_on_resonant(t, r0, phi0, ss, t0)
    if kind in ("off_resonant", "external_asymmetric"):
        return closed_form_off_resonant(t, r0, phi0, ss, t0)
    return constant_r_solution(t, r0, phi0, ss, t0)


def resample(traj: Trajectory, t) -> Trajectory:
    """The same solution (same method, initial state and t0) at new sample times.

    ``t`` must start at ``traj.t0``; only the times change, so branch
    tracking of chi is redone on the new grid.
    """
    t = _time_grid(t)
    if t[0] != traj.t0:
        raise ValueError("resampled grid must start at t0")
    r0, phi0 = float(traj.r[0]), float(traj.phi[0])
    ss = traj.schedules
    if traj.method == "numeric":
        if t.size == 1:
            return integrate_characteristic(r0, phi0, ss, traj.t0, traj.t0, 1)
        return integrate_characteristic(r0, phi0, ss, traj.t0, float(t[-1]), t.size, times=t)
    if traj.method == "closed_on_resonant":
        return closed_form_on_resonant(t, r0, phi0, ss, traj.t0)
    if traj.method == "closed_off_resonant":
        return closed_form_off_resonant(t, r0, phi0, ss, traj.t0)
    return constant_r_solution(t, r0, phi0, ss, traj.t0)
