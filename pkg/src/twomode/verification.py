"""Self-checks run by ``twomode verify``: each returns measured values against bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characteristic import closed_form_off_resonant, closed_form_on_resonant, integrate_characteristic, solve
from .fockoracle import build_transformed_hamiltonian, compare_with_oracle, predicted_states
from .phases import global_phase, kinematic_phases, wrap
from .presets import G0
from .regimes import Regime
from .schedules import HarmonicSchedule, ScheduleSet

SUITES = ("exact-N1", "exact-lambda0", "closedform", "gauge")

__all__ = ["Check", "SUITES", "run_suite", "run_suites", "report_table",
           "exact_n1_cases", "gauge_dressing"]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    bound: float
    relation: str  # "<=" or ">="

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value <= self.bound if self.relation == "<=" else self.value >= self.bound


def _ss(wa, wb, g, regime, **kw):
    wrap_s = lambda v: v if isinstance(v, HarmonicSchedule) else HarmonicSchedule(float(v))  # noqa: E731
    return ScheduleSet(wrap_s(wa), wrap_s(wb), wrap_s(g), regime, **kw)


def exact_n1_cases():
    """(label, r0, phi0, schedules, tau_end) for the three solution families at tau = g0 t."""
    td_g = HarmonicSchedule(G0, G0, G0, 0.0)
    return [
        ("on-resonant, modulated g", math.pi / 3, 0.0, _ss(G0 / 10, G0 / 20, td_g, Regime.on_resonant()), math.pi),
        ("off-resonant, eta=2", math.pi / 3, 0.0, _ss(G0 / 10, G0 / 20, G0, Regime.off_resonant(G0)), math.pi),
        ("constant r", math.pi / 2.1, 0.0, _ss(G0 / 10, G0 / 20, 0.0, Regime.constant_r()), math.pi),
    ]


def _exact_n1():
    out = []
    for label, r0, phi0, ss, tau in exact_n1_cases():
        traj = solve(r0, phi0, ss, 0.0, tau / G0, 201)
        rep = compare_with_oracle(traj, 1)
        out.append(Check("exact-N1", f"{label}: fidelity", rep["min_fidelity"], 1 - 1e-8, ">="))
        out.append(Check("exact-N1", f"{label}: total phase gap (rad)", rep["max_total_phase_gap"], 1e-6, "<="))
    return out


def _exact_lambda0():
    gamma = G0 / 20
    kw = dict(gamma_a=gamma, gamma_b=gamma, gamma_ab=2 * gamma)
    cases = [
        ("on-resonant", _ss(G0 / 10, G0 / 20, G0, Regime.on_resonant(), **kw)),
        ("off-resonant", _ss(G0 / 10, G0 / 20, G0, Regime.off_resonant(G0), **kw)),
    ]
    out = []
    for label, ss in cases:
        traj = solve(math.pi / 3, 0.0, ss, 0.0, math.pi / G0, 201)
        rep = compare_with_oracle(traj, 8)
        out.append(Check("exact-lambda0", f"N=8 {label}: fidelity", rep["min_fidelity"], 1 - 1e-6, ">="))
        out.append(Check("exact-lambda0", f"N=8 {label}: global phase gap (rad)",
                         rep["max_global_phase_gap"], 1e-6, "<="))
        inel = max(np.abs(build_transformed_hamiltonian(ss, 8, float(t), float(r), float(p))[2]).max()
                   for t, r, p in zip(traj.t[::20], traj.r[::20], traj.phi[::20]))
        out.append(Check("exact-lambda0", f"N=8 {label}: max |H_inel|", float(inel), 0.0, "<="))
    return out


def _closedform():
    tau = 20 * math.pi
    n = 4001
    t1 = tau / G0
    cases = [
        ("on-resonant", _ss(G0 / 10, G0 / 20, G0, Regime.on_resonant()), closed_form_on_resonant),
        ("on-resonant, modulated g", _ss(G0 / 10, G0 / 20, HarmonicSchedule(G0, G0, G0, 0.0),
                                         Regime.on_resonant()), closed_form_on_resonant),
        ("off-resonant, eta=2", _ss(G0 / 10, G0 / 20, G0, Regime.off_resonant(G0)), closed_form_off_resonant),
        ("off-resonant, eta=0.1", _ss(G0 / 10, G0 / 20, G0, Regime.off_resonant(20 * G0)),
         closed_form_off_resonant),
    ]
    out = []
    for label, ss, closed in cases:
        num = integrate_characteristic(math.pi / 3, 0.0, ss, 0.0, t1, n)
        ref = closed(num.t, math.pi / 3, 0.0, ss, 0.0)
        out.append(Check("closedform", f"{label}: max |cos r gap|", float(np.abs(num.x - ref.x).max()), 1e-6, "<="))
        out.append(Check("closedform", f"{label}: max Bloch vector gap",
                         float(np.abs(num.bloch_vector - ref.bloch_vector).max()), 1e-6, "<="))
        out.append(Check("closedform", f"{label}: constant-of-motion drift",
                         float(num.constant_drift().max()), 1e-8, "<="))
    return out


def gauge_dressing(states: np.ndarray, t: np.ndarray, seed: int = 0) -> np.ndarray:
    """exp(i alpha(t)) applied per sample, alpha a random smooth trigonometric sum."""
    rng = np.random.default_rng(seed)
    span = t[-1] - t[0]
    x = (t - t[0]) / span
    amps = rng.normal(0.0, 2.0, 4)
    freqs = rng.uniform(0.5, 3.0, 4)
    phases = rng.uniform(0, 2 * math.pi, 4)
    alpha = sum(a * np.sin(2 * math.pi * f * x + p) for a, f, p in zip(amps, freqs, phases))
    alpha = alpha + rng.normal(0.0, 3.0) * x
    return states * np.exp(1j * alpha)[:, None]


def _gauge():
    ss = _ss(G0 / 10, G0 / 20, G0, Regime.on_resonant())
    traj = solve(math.pi / 3, 0.0, ss, 0.0, math.pi / G0, 2001)
    n = 3
    states = predicted_states(traj, global_phase(traj, n).phi_N, n)
    t_ref, d_ref, g_ref = kinematic_phases(states)
    t_new, d_new, g_new = kinematic_phases(gauge_dressing(states, traj.t, seed=12345))
    return [
        Check("gauge", "max |change in phi_G| (rad)", float(np.abs(wrap(g_new - g_ref)).max()), 1e-8, "<="),
        Check("gauge", "max |change in phi_T| (rad)", float(np.abs(wrap(t_new - t_ref)).max()), 0.1, ">="),
        Check("gauge", "max |change in phi_D| (rad)", float(np.abs(d_new - d_ref).max()), 0.1, ">="),
    ]


_RUNNERS = {"exact-N1": _exact_n1, "exact-lambda0": _exact_lambda0,
            "closedform": _closedform, "gauge": _gauge}


def run_suite(name: str) -> list[Check]:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    return _RUNNERS[name]()


def run_suites(name: str) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    return [c for n in names for c in run_suite(n)]


def report_table(checks: list[Check]) -> dict[str, np.ndarray]:
    return {
        "suite": np.array([c.suite for c in checks], dtype=object),
        "check": np.array([c.name for c in checks], dtype=object),
        "value": np.array([c.value for c in checks], dtype=float),
        "relation": np.array([c.relation for c in checks], dtype=object),
        "bound": np.array([c.bound for c in checks], dtype=float),
        "passed": np.array([int(c.passed) for c in checks], dtype=int),
    }
