"""Read-only parameter sets behind the eleven reference figures.

All runs use N = 1, delta0 = 0 and g0 = 625 pi rad/s unless a series says
otherwise. Times are reported as tau = scale * t, where the scale is
omega_a0 for the constant-r figures and g0 everywhere else. Run lengths
that are not otherwise fixed use ``DEFAULT_TAU_END``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType

from .regimes import Regime
from .schedules import HarmonicSchedule, ScheduleSet

PI = math.pi
G0 = 625 * PI
OMEGA_A0_FIG1 = 62.5 * PI
DEFAULT_TAU_END = 4 * PI
DEFAULT_PORTRAIT_GRID = 61

__all__ = ["Series", "FigurePreset", "PRESETS", "get_preset", "G0", "DEFAULT_TAU_END"]


@dataclass(frozen=True)
class Series:
    """One curve of a figure: initial point, schedules and run length in tau."""

    label: str
    r0: float
    phi0: float
    schedules: ScheduleSet
    tau_end: float
    n_samples: int = 4001
    n_atoms: int = 1


@dataclass(frozen=True)
class FigurePreset:
    """``kind`` is "phase" (phi_G curves), "bloch" (vector paths) or "portrait" (C on a grid)."""

    figure: int
    kind: str
    tau_scale: float
    tau_label: str
    series: tuple[Series, ...] = ()
    portraits: tuple[tuple[str, Regime, float | None], ...] = ()
    note: str = ""
    extra: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def series_by_label(self, label: str) -> Series:
        for s in self.series:
            if s.label == label:
                return s
        raise KeyError(label)


def _const(v: float) -> HarmonicSchedule:
    return HarmonicSchedule(float(v))


def _ss(wa, wb, g, regime, **kw) -> ScheduleSet:
    wrap = lambda v: v if isinstance(v, HarmonicSchedule) else _const(v)  # noqa: E731
    return ScheduleSet(wrap(wa), wrap(wb), wrap(g), regime, **kw)


def _fig1() -> FigurePreset:
    wa0 = OMEGA_A0_FIG1
    flat = _ss(wa0, wa0 / 2, 0.0, Regime.constant_r())
    mod = _ss(HarmonicSchedule(wa0, wa0 / 4, wa0 / 2, 0.0),
              HarmonicSchedule(wa0 / 2, wa0 / 4, wa0 / 2, PI / 2), 0.0, Regime.constant_r())
    return FigurePreset(1, "phase", wa0, "omega_a0 t", (
        Series("thick solid", PI / 2, 0.0, flat, 8 * PI),
        Series("solid", PI / 2.1, 0.0, flat, 8 * PI),
        Series("dashed", PI / 2.1, 0.0, mod, 8 * PI),
    ), note="|phi_G| against tau; r constant, g = 0")


def _fig2() -> FigurePreset:
    wa0 = OMEGA_A0_FIG1
    flat = _ss(wa0, wa0 / 2, 0.0, Regime.constant_r())
    return FigurePreset(2, "bloch", wa0, "omega_a0 t", (
        Series("grey", PI / 2, 0.0, flat, 4 * PI, 1001),
        Series("black", PI / 2.1, 0.0, flat, 4 * PI, 1001),
    ))


def _fig4() -> FigurePreset:
    # Delta = 0 on resonance means equal trap frequencies
    ss = _ss(G0 / 10, G0 / 10, G0, Regime.on_resonant())
    return FigurePreset(4, "phase", G0, "g0 t", (
        Series("thick solid", PI, PI / 2, ss, DEFAULT_TAU_END),
        Series("solid", PI / 5, PI / 4, ss, DEFAULT_TAU_END),
        Series("dashed", PI / 4, 3 * PI / 10, ss, DEFAULT_TAU_END),
        Series("dotted", PI / 3, 0.0, ss, DEFAULT_TAU_END),
        Series("dash-dot", PI / 3, PI, ss, DEFAULT_TAU_END),
    ))


def _fig5() -> FigurePreset:
    ss = _ss(G0 / 10, G0 / 10, G0, Regime.on_resonant())
    return FigurePreset(5, "bloch", G0, "g0 t", (
        Series("black", PI, PI / 2, ss, PI, 1001),
        Series("grey", PI / 3, 0.0, ss, PI, 1001),
    ))


def _fig6() -> FigurePreset:
    ab = _ss(G0 / 10, G0 / 20, G0, Regime.on_resonant())
    ba = _ss(G0 / 20, G0 / 10, G0, Regime.on_resonant())
    tau = 120 * PI
    return FigurePreset(6, "phase", G0, "g0 t", (
        Series("thick solid", PI, PI / 2, ab, tau, 24001),
        Series("solid", PI / 3, 0.0, ab, tau, 24001),
        Series("dotted", PI / 3, PI, ab, tau, 24001),
        Series("dashed", PI / 3, PI, ba, tau, 24001),
    ))


def _fig7() -> FigurePreset:
    ss = _ss(G0 / 10, G0 / 20, G0, Regime.on_resonant())
    return FigurePreset(7, "bloch", G0, "g0 t", (
        Series("black", PI, PI / 2, ss, PI, 1001),
        Series("grey", PI / 3, 0.0, ss, PI, 1001),
    ))


def _off(eta: float, wa=G0 / 10, wb=G0 / 20) -> ScheduleSet:
    return _ss(wa, wb, G0, Regime.off_resonant(2 * G0 / eta))


def _fig9() -> FigurePreset:
    return FigurePreset(9, "phase", G0, "g0 t", (
        Series("dotted", PI / 3, 0.0, _off(40.0), DEFAULT_TAU_END),
        Series("solid", PI / 3, 0.0, _off(0.1), DEFAULT_TAU_END),
        Series("thick solid", PI / 3, 0.0, _off(2.0), DEFAULT_TAU_END),
        Series("asymmetric wells", PI / 3, 0.0,
               _ss(G0 / 10, G0 / 20, G0, Regime.external_asymmetric(G0 / 20)), DEFAULT_TAU_END),
    ), note="eta = 40, 0.1, 2 via varpi = 2 g0 / eta; the asymmetric-wells set uses omega = varpi = g0/20")


def _fig10() -> FigurePreset:
    tau = 9 * PI / 10
    return FigurePreset(10, "bloch", G0, "g0 t", (
        Series("black", PI / 3, 0.0, _off(0.1), tau, 1001),
        Series("grey", PI / 3, 0.0, _off(2.0), tau, 1001),
    ))


def _fig11() -> FigurePreset:
    rabi = HarmonicSchedule(G0, G0, G0, 0.0)
    wa = HarmonicSchedule(G0, G0 / 2, G0 / 2, 0.0)
    wb = HarmonicSchedule(G0 / 2, G0 / 2, G0 / 2, -PI / 2)
    return FigurePreset(11, "phase", G0, "g0 t", (
        Series("dotted", PI / 3, 0.0, _ss(G0 / 10, G0 / 10, rabi, Regime.on_resonant()), DEFAULT_TAU_END),
        Series("solid", PI / 3, 0.0, _ss(G0 / 10, G0 / 20, rabi, Regime.on_resonant()), DEFAULT_TAU_END),
        Series("dashed", PI / 3, 0.0, _ss(G0, G0 / 2, rabi, Regime.on_resonant()), DEFAULT_TAU_END),
        Series("thick solid", PI / 3, 0.0, _ss(wa, wb, G0, Regime.off_resonant(G0)), DEFAULT_TAU_END),
    ))


def _portrait(fig: int, entries) -> FigurePreset:
    return FigurePreset(fig, "portrait", G0, "g0 t", portraits=tuple(entries),
                        extra=MappingProxyType({"grid": DEFAULT_PORTRAIT_GRID}))


def _build():
    on = Regime.on_resonant()
    off = Regime.off_resonant(G0)
    return {
        1: _fig1(), 2: _fig2(),
        3: _portrait(3, [("on-resonant", on, None)]),
        4: _fig4(), 5: _fig5(), 6: _fig6(), 7: _fig7(),
        8: _portrait(8, [("eta=0.1", off, 0.1), ("eta=2", off, 2.0), ("eta=40", off, 40.0)]),
        9: _fig9(), 10: _fig10(), 11: _fig11(),
    }


PRESETS = MappingProxyType(_build())


def get_preset(figure: int) -> FigurePreset:
    try:
        return PRESETS[int(figure)]
    except (KeyError, ValueError):
        raise KeyError(f"no preset for figure {figure!r}; expected 1..11") from None
