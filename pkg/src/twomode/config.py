"""Run configuration: a sectioned key-value file with the unit in every key name.

Example::

    [schedules]
    omega_a0_radps = 62.5*pi
    omega_b0_radps = 31.25*pi
    rabi0_radps = 0

    [regime]
    kind = constant_r

    [initial]
    r0_rad = pi/2
    phi0_rad = 0
    n_atoms = 1

    [integration]
    tau_end = 8*pi
    n_samples = 4001

    [output]
    tau_scale = omega_a0

Numeric values may be plain numbers or arithmetic on ``pi``.
"""

from __future__ import annotations

import ast
import configparser
import math
import operator
import re
from dataclasses import dataclass
from pathlib import Path

from .regimes import Regime
from .schedules import HarmonicSchedule, PhysicalConstants, ScheduleSet, gaussian_mode_overlaps

__all__ = ["ConfigError", "RunConfig", "parse_value", "load_config", "parse_config"]


class ConfigError(ValueError):
    """Bad or missing configuration entry; the message names the line and field."""


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_value(text: str) -> float:
    """Evaluate a number or an arithmetic expression in ``pi`` without eval()."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression element {ast.dump(node)}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"cannot read {text!r} as a number: {exc}") from None
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


_ALLOWED = {
    "physics": {"gamma_a_radps", "gamma_b_radps", "gamma_ab_radps", "mass_kg", "scat_a_m",
                "scat_b_m", "scat_ab_m", "laser_amp_radps"},
    "schedules": {f"{p}_{s}" for p in ("omega_a", "omega_b", "rabi")
                  for s in ("amp_radps", "freq_radps", "phase_rad")}
                 | {"omega_a0_radps", "omega_b0_radps", "rabi0_radps"},
    "regime": {"kind", "varpi_radps", "eta", "omega_radps"},
    "initial": {"r0_rad", "phi0_rad", "delta0_rad", "n_atoms"},
    "integration": {"method", "n_samples", "t0_s", "t1_s", "tau_end", "rtol"},
    "output": {"path", "tau_scale", "phase"},
}


@dataclass(frozen=True)
class RunConfig:
    schedules: ScheduleSet
    r0: float
    phi0: float
    n_atoms: int
    t0: float
    t1: float
    n_samples: int
    method: str
    rtol: float
    tau_scale: float
    unwrapped_phase: bool
    output_path: str | None


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            self.parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from None
        self.lines = self._line_numbers(text)

    @staticmethod
    def _line_numbers(text):
        where, section = {}, None
        for no, line in enumerate(text.splitlines(), 1):
            m = re.match(r"\s*\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip()
                where[(section, None)] = no
                continue
            m = re.match(r"\s*([^=:#;\s][^=:]*?)\s*[=:]", line)
            if m and section:
                where[(section, m.group(1).strip().lower())] = no
        return where

    def where(self, section, key=None) -> str:
        no = self.lines.get((section, key)) or self.lines.get((section, None))
        field = f"[{section}] {key}" if key else f"[{section}]"
        return f"{self.source}:{no}: {field}" if no else f"{self.source}: {field}"

    def check_keys(self):
        for section in self.parser.sections():
            if section not in _ALLOWED:
                raise ConfigError(f"{self.where(section)}: unknown section")
            for key in self.parser[section]:
                if key not in _ALLOWED[section]:
                    raise ConfigError(f"{self.where(section, key)}: unknown key")

    def has(self, section, key) -> bool:
        return self.parser.has_option(section, key)

    def text(self, section, key, default=None):
        if self.has(section, key):
            return self.parser[section][key].strip()
        if default is None:
            raise ConfigError(f"{self.where(section, key)}: missing required value")
        return default

    def number(self, section, key, default=None) -> float:
        if not self.has(section, key):
            if default is None:
                raise ConfigError(f"{self.where(section, key)}: missing required value")
            return float(default)
        try:
            return parse_value(self.parser[section][key])
        except ValueError as exc:
            raise ConfigError(f"{self.where(section, key)}: {exc}") from None

    def integer(self, section, key, default=None) -> int:
        v = self.number(section, key, default)
        if v != int(v):
            raise ConfigError(f"{self.where(section, key)}: expected an integer, got {v!r}")
        return int(v)


def _schedule(rd: _Reader, name: str, base_key: str) -> HarmonicSchedule:
    return HarmonicSchedule(
        rd.number("schedules", base_key, 0.0 if name == "rabi" else None),
        rd.number("schedules", f"{name}_amp_radps", 0.0),
        rd.number("schedules", f"{name}_freq_radps", 0.0),
        rd.number("schedules", f"{name}_phase_rad", 0.0),
    )


def _collision_rates(rd: _Reader, wa0: float, wb0: float):
    si = ("mass_kg", "scat_a_m", "scat_b_m", "scat_ab_m")
    if any(rd.has("physics", k) for k in si):
        try:
            pc = PhysicalConstants(*(rd.number("physics", k) for k in si),
                                   laser_amp=rd.number("physics", "laser_amp_radps", 0.0))
            ga, gb, gab, overlap = gaussian_mode_overlaps(pc, wa0, wb0)
        except ValueError as exc:
            raise ConfigError(f"{rd.where('physics')}: {exc}") from None
        return ga, gb, gab, overlap * pc.laser_amp / 2
    return (rd.number("physics", "gamma_a_radps", 0.0), rd.number("physics", "gamma_b_radps", 0.0),
            rd.number("physics", "gamma_ab_radps", 0.0), None)


def _regime(rd: _Reader, g0: float) -> Regime:
    kind = rd.text("regime", "kind")
    try:
        if kind == "off_resonant":
            if rd.has("regime", "varpi_radps"):
                return Regime.off_resonant(rd.number("regime", "varpi_radps"))
            eta = rd.number("regime", "eta")
            if eta == 0:
                raise ValueError("eta must be non-zero")
            return Regime.off_resonant(2 * g0 / eta)
        if kind == "external_asymmetric":
            return Regime.external_asymmetric(rd.number("regime", "omega_radps"))
        return Regime(kind)
    except ValueError as exc:
        raise ConfigError(f"{rd.where('regime', 'kind')}: {exc}") from None


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    rd = _Reader(text, source)
    rd.check_keys()
    wa = _schedule(rd, "omega_a", "omega_a0_radps")
    wb = _schedule(rd, "omega_b", "omega_b0_radps")
    ga, gb, gab, rabi_from_laser = _collision_rates(rd, wa.base, wb.base)
    rabi = _schedule(rd, "rabi", "rabi0_radps")
    if rabi_from_laser is not None and not rd.has("schedules", "rabi0_radps"):
        rabi = HarmonicSchedule(rabi_from_laser, rabi.mod_amp, rabi.mod_freq, rabi.mod_phase)
    regime = _regime(rd, rabi.base)
    delta0 = rd.number("initial", "delta0_rad", 0.0)
    try:
        ss = ScheduleSet(wa, wb, rabi, regime, delta0, ga, gb, gab)
    except ValueError as exc:
        raise ConfigError(f"{rd.where('schedules')}: {exc}") from None

    r0 = rd.number("initial", "r0_rad")
    if not 0.0 <= r0 <= math.pi:
        raise ConfigError(f"{rd.where('initial', 'r0_rad')}: r0 must lie in [0, pi]")
    phi0 = rd.number("initial", "phi0_rad")
    n_atoms = rd.integer("initial", "n_atoms", 1)
    if n_atoms < 1:
        raise ConfigError(f"{rd.where('initial', 'n_atoms')}: must be a positive integer")

    scale_text = rd.text("output", "tau_scale", "g0")
    if scale_text == "g0":
        tau_scale = rabi.base
    elif scale_text == "omega_a0":
        tau_scale = wa.base
    else:
        tau_scale = rd.number("output", "tau_scale")
    if not tau_scale > 0:
        raise ConfigError(f"{rd.where('output', 'tau_scale')}: tau scale must be positive, got {tau_scale!r}")

    t0 = rd.number("integration", "t0_s", 0.0)
    if rd.has("integration", "t1_s"):
        t1 = rd.number("integration", "t1_s")
    else:
        t1 = t0 + rd.number("integration", "tau_end") / tau_scale
    if t1 < t0:
        raise ConfigError(f"{rd.where('integration')}: run ends before it starts")
    n_samples = rd.integer("integration", "n_samples", 2001)
    if n_samples < 2:
        raise ConfigError(f"{rd.where('integration', 'n_samples')}: need at least 2 samples")
    method = rd.text("integration", "method", "closed_form")
    if method not in ("closed_form", "numeric"):
        raise ConfigError(f"{rd.where('integration', 'method')}: expected closed_form or numeric")
    phase = rd.text("output", "phase", "principal")
    if phase not in ("principal", "unwrapped"):
        raise ConfigError(f"{rd.where('output', 'phase')}: expected principal or unwrapped")
    path = rd.text("output", "path", "") or None
    return RunConfig(ss, r0, phi0, n_atoms, t0, t1, n_samples, method,
                     rd.number("integration", "rtol", 1e-10), tau_scale, phase == "unwrapped", path)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))
