"""Time-dependent Hamiltonian parameters of the two-mode condensate.

All frequencies are angular (rad/s) and hbar = 1 inside the package. The
only place SI constants enter is :func:`gaussian_mode_overlaps`, which turns
atomic data into collision rates and the Rabi overlap factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import constants, integrate

from .regimes import Regime

QUAD_ABS_TOL = 1e-10

__all__ = [
    "PhysicalConstants",
    "HarmonicSchedule",
    "ScheduleSet",
    "IntegrationError",
    "eval_trap",
    "effective_frequency",
    "detuning_rate",
    "detuning_phase",
    "cumulative_quad",
    "cumulative_integral",
    "gaussian_mode_overlaps",
]


class IntegrationError(RuntimeError):
    """Raised when a quadrature or ODE solve fails to meet its tolerance."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Atomic data in SI units: mass (kg), scattering lengths (m), laser Rabi amplitude (rad/s)."""

    mass: float
    scat_a: float
    scat_b: float
    scat_ab: float
    laser_amp: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        for name in ("scat_a", "scat_b", "scat_ab", "laser_amp"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class HarmonicSchedule:
    """``base + mod_amp * sin(mod_freq * t + mod_phase)``."""

    base: float
    mod_amp: float = 0.0
    mod_freq: float = 0.0
    mod_phase: float = 0.0

    @property
    def is_constant(self) -> bool:
        return self.mod_amp == 0.0

    def __call__(self, t):
        return eval_trap(self, t)

    def integral(self, t0, t):
        """Exact antiderivative difference, ``int_{t0}^{t} s(tau) dtau``."""
        t = np.asarray(t, dtype=float)
        out = self.base * (t - t0)
        if self.mod_amp == 0.0:
            return out
        # cos(w t0 + p) - cos(w t + p) = 2 sin(w (t + t0)/2 + p) sin(w (t - t0)/2), written
        # with sinc so that small or zero mod_freq stays finite
        w, p = self.mod_freq, self.mod_phase
        span = t - t0
        return out + self.mod_amp * span * np.sinc(w * span / (2 * math.pi)) * np.sin(w * (t + t0) / 2 + p)


def eval_trap(s: HarmonicSchedule, t):
    t = np.asarray(t, dtype=float)
    if s.mod_amp == 0.0:
        return np.full_like(t, s.base) if t.ndim else float(s.base)
    out = s.base + s.mod_amp * np.sin(s.mod_freq * t + s.mod_phase)
    return out if t.ndim else float(out)


@dataclass(frozen=True)
class ScheduleSet:
    """Every parameter of the two-mode Hamiltonian as a function of time.

    ``omega_a``/``omega_b`` are the trap frequencies, ``rabi`` is g(t). The
    detuning Delta(t) is not stored; it follows from ``regime``. Collision
    rates are constant.
    """

    omega_a: HarmonicSchedule
    omega_b: HarmonicSchedule
    rabi: HarmonicSchedule
    regime: Regime = field(default_factory=Regime.on_resonant)
    delta0: float = 0.0
    gamma_a: float = 0.0
    gamma_b: float = 0.0
    gamma_ab: float = 0.0

    @property
    def collision_imbalance(self) -> float:
        """Lambda = gamma_a + gamma_b - gamma_ab."""
        return self.gamma_a + self.gamma_b - self.gamma_ab

    def omega(self, t):
        return effective_frequency(self, t)

    def g(self, t):
        return eval_trap(self.rabi, t)

    def detuning(self, t):
        return detuning_rate(self, t)


def effective_frequency(ss: ScheduleSet, t):
    """omega(t) = omega_a(t) - omega_b(t)."""
    return eval_trap(ss.omega_a, t) - eval_trap(ss.omega_b, t)


def detuning_rate(ss: ScheduleSet, t):
    """Delta(t) for the schedule set's regime."""
    kind = ss.regime.kind
    if kind == "on_resonant":
        return effective_frequency(ss, t)
    if kind == "off_resonant":
        return effective_frequency(ss, t) - ss.regime.varpi
    t = np.asarray(t, dtype=float)
    return np.zeros_like(t) if t.ndim else 0.0


def detuning_phase(ss: ScheduleSet, t0: float, t) -> np.ndarray | float:
    """delta(t) = delta0 + int_{t0}^{t} Delta(tau) dtau by adaptive quadrature.

    ``t`` may be an array; it is integrated interval by interval in sorted
    order so the cost stays linear in the number of samples.
    """
    if ss.regime.kind in ("constant_r", "external_symmetric", "external_asymmetric"):
        t_arr = np.asarray(t, dtype=float)
        return np.full_like(t_arr, ss.delta0) if t_arr.ndim else float(ss.delta0)
    vals = cumulative_quad(lambda s: float(detuning_rate(ss, s)), t0, t)
    return vals + ss.delta0


def cumulative_quad(f: Callable[[float], float], t0: float, t, epsabs: float = QUAD_ABS_TOL):
    """``int_{t0}^{t_k} f`` for every entry of ``t`` using QUADPACK per interval."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    order = np.argsort(t_arr, kind="stable")
    ts = t_arr[order]
    out = np.empty_like(ts)
    acc, prev = 0.0, float(t0)
    # points before t0 are integrated backwards from t0
    below = ts < t0
    for idx in np.flatnonzero(below)[::-1]:
        val, err = integrate.quad(f, prev, ts[idx], epsabs=epsabs, epsrel=0.0, limit=200)
        if err > 10 * epsabs:
            raise IntegrationError(f"quadrature did not converge on [{prev}, {ts[idx]}]: err={err:g}")
        acc += val
        prev = ts[idx]
        out[idx] = acc
    acc, prev = 0.0, float(t0)
    for idx in np.flatnonzero(~below):
        if ts[idx] != prev:
            val, err = integrate.quad(f, prev, ts[idx], epsabs=epsabs, epsrel=0.0, limit=200)
            if err > 10 * epsabs:
                raise IntegrationError(f"quadrature did not converge on [{prev}, {ts[idx]}]: err={err:g}")
            acc += val
            prev = ts[idx]
        out[idx] = acc
    result = np.empty_like(out)
    result[order] = out
    if np.ndim(t) == 0:
        return float(result[0])
    return result


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _gl(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    return half * (vals @ _GL_W)


def cumulative_integral(f: Callable[[np.ndarray], np.ndarray], t: np.ndarray,
                        tol: float = QUAD_ABS_TOL, max_depth: int = 40) -> np.ndarray:
    """Running integral of a vectorised integrand over the sample grid ``t``.

    Each sample interval is integrated with 16-point Gauss-Legendre and
    bisected until the whole-interval and two-halves estimates agree to
    ``tol``. Returns an array with ``out[0] == 0``.
    """
    t = np.asarray(t, dtype=float)
    if t.size < 2:
        return np.zeros_like(t)
    a, b = t[:-1].copy(), t[1:].copy()
    owner = np.arange(a.size)
    piece = np.zeros(a.size)
    for _ in range(max_depth):
        m = 0.5 * (a + b)
        whole = _gl(f, a, b)
        halves = _gl(f, a, m) + _gl(f, m, b)
        ok = np.abs(whole - halves) <= tol * np.maximum(1.0, np.abs(halves)) / 16
        ok |= (b - a) <= 1e-14 * np.maximum(1.0, np.abs(a))
        np.add.at(piece, owner[ok], halves[ok])
        bad = ~ok
        if not bad.any():
            break
        a, b, owner = (np.concatenate([a[bad], m[bad]]), np.concatenate([m[bad], b[bad]]),
                       np.concatenate([owner[bad], owner[bad]]))
    else:
        raise IntegrationError("cumulative_integral: refinement depth exhausted")
    return np.concatenate([[0.0], np.cumsum(piece)])


def gaussian_mode_overlaps(pc: PhysicalConstants, wa0: float, wb0: float):
    """Collision rates and Rabi overlap for stationary Gaussian ground-state modes.

    Returns ``(gamma_a, gamma_b, gamma_ab, g_scale)`` in rad/s (the last one
    dimensionless) with g = laser_amp / 2 * g_scale.
    """
    if not (wa0 > 0 and wb0 > 0):
        raise ValueError("trap frequencies must be positive")
    hbar = constants.hbar
    xa = math.sqrt(hbar / (2 * pc.mass * wa0))
    xb = math.sqrt(hbar / (2 * pc.mass * wb0))
    quartic_a = gaussian_quartic_integral(xa)
    quartic_b = gaussian_quartic_integral(xb)
    cross = (2 * math.pi * (xa**2 + xb**2)) ** -1.5
    g_scale = (2 * xa * xb / (xa**2 + xb**2)) ** 1.5
    gamma_a = 4 * math.pi * hbar * pc.scat_a / (2 * pc.mass) * quartic_a
    gamma_b = 4 * math.pi * hbar * pc.scat_b / (2 * pc.mass) * quartic_b
    gamma_ab = 4 * math.pi * hbar * pc.scat_ab / pc.mass * cross
    return gamma_a, gamma_b, gamma_ab, g_scale


def gaussian_quartic_integral(width: float) -> float:
    """int |phi|^4 d^3r for the normalised Gaussian of position spread ``width``."""
    return 1.0 / (8 * math.pi**1.5 * width**3)
