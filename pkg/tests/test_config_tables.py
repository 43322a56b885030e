import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twomode.config import ConfigError, parse_config, parse_value
from twomode.regimes import Regime
from twomode.schedules import HarmonicSchedule, ScheduleSet
from twomode.tables import COLUMNS, format_csv, read_csv, run_trajectory, trajectory_table, write_csv

FIG1 = """\
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
n_samples = 801

[output]
tau_scale = omega_a0
"""


# --- values and config ------------------------------------------------------------

@pytest.mark.parametrize("text, value", [
    ("1.5", 1.5), ("pi/2", math.pi / 2), ("-2*pi", -2 * math.pi), ("62.5*pi", 62.5 * math.pi),
    ("2**3", 8.0), ("1e-3", 1e-3), (" (1+2)*pi ", 3 * math.pi),
])
def test_parse_value(text, value):
    assert parse_value(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["__import__('os')", "pi()", "x", "1/0", "True", "", "10**400", "'a'"])
def test_parse_value_rejects(text):
    with pytest.raises(ValueError):
        parse_value(text)


def test_fig1_config():
    cfg = parse_config(FIG1)
    assert cfg.schedules.regime == Regime.constant_r()
    assert cfg.r0 == pytest.approx(math.pi / 2)
    assert cfg.tau_scale == pytest.approx(62.5 * math.pi)
    assert cfg.t1 == pytest.approx(8 * math.pi / (62.5 * math.pi))
    assert (cfg.n_samples, cfg.method, cfg.unwrapped_phase, cfg.output_path) == (801, "closed_form", False, None)


def test_off_resonant_from_eta():
    text = FIG1.replace("rabi0_radps = 0", "rabi0_radps = 625*pi").replace("kind = constant_r",
                                                                          "kind = off_resonant\neta = 2")
    cfg = parse_config(text)
    assert cfg.schedules.regime.varpi == pytest.approx(625 * math.pi)


def test_physics_si_inputs_set_rates():
    text = FIG1 + "\n[physics]\nmass_kg = 1.4e-25\nscat_a_m = 5e-9\nscat_b_m = 5e-9\nscat_ab_m = 5e-9\n"
    cfg = parse_config(text)
    # equal scattering lengths: gamma scales as width^-3, i.e. as trap frequency^(3/2)
    assert cfg.schedules.gamma_a / cfg.schedules.gamma_b == pytest.approx(2**1.5, rel=1e-12)


@pytest.mark.parametrize("edit, where", [
    (("n_samples = 801", "n_samples = 1"), "[integration] n_samples"),
    (("r0_rad = pi/2", "r0_rad = 4"), "[initial] r0_rad"),
    (("kind = constant_r", "kind = sideways"), "[regime] kind"),
    (("phi0_rad = 0", "phi0_rad = zero"), "[initial] phi0_rad"),
    (("n_atoms = 1", "n_atoms = 1.5"), "[initial] n_atoms"),
    (("tau_scale = omega_a0", "tau_scale = -1"), "[output] tau_scale"),
    (("tau_end = 8*pi", "tau_end = 8*pi\nbogus = 1"), "[integration] bogus"),
])
def test_config_errors_name_line_and_field(edit, where):
    text = FIG1.replace(*edit)
    with pytest.raises(ConfigError) as info:
        parse_config(text, "run.ini")
    msg = str(info.value)
    assert msg.startswith("run.ini:") and where in msg
    line = int(msg.split(":")[1])
    assert where.split("] ")[1] in text.splitlines()[line - 1]


def test_missing_required_value():
    with pytest.raises(ConfigError, match=r"\[initial\] r0_rad: missing"):
        parse_config(FIG1.replace("r0_rad = pi/2\n", ""))


def test_unknown_section():
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config(FIG1 + "\n[extras]\nfoo = 1\n")


# --- tables and CSV ---------------------------------------------------------------------

def _fig1_result(n_samples=801, t1=8 * math.pi / (62.5 * math.pi)):
    w = 62.5 * math.pi
    ss = ScheduleSet(HarmonicSchedule(w), HarmonicSchedule(w / 2), HarmonicSchedule(0.0), Regime.constant_r())
    return run_trajectory(math.pi / 2, 0.0, ss, 0.0, t1, n_samples, tau_scale=w)


def test_fig1_table_plateaus():
    tab = trajectory_table(_fig1_result())
    tau, phig, ok = tab["tau"], np.abs(tab["phiG"]), tab["defined"] == 1
    assert np.abs(phig[(tau < 2 * math.pi - 1e-3) & ok]).max() < 1e-9
    mid = (tau > 2 * math.pi + 1e-3) & (tau < 6 * math.pi - 1e-3) & ok
    np.testing.assert_allclose(phig[mid], math.pi, atol=1e-9)
    assert tab["winding"][-1] == 2


def test_csv_round_trip_and_determinism(tmp_path):
    tab = trajectory_table(_fig1_result(n_samples=101))
    a = write_csv(tmp_path / "a.csv", tab, COLUMNS)
    b = write_csv(tmp_path / "b.csv", trajectory_table(_fig1_result(n_samples=101)), COLUMNS)
    assert a.read_bytes() == b.read_bytes()
    back = read_csv(a)
    assert tuple(back) == COLUMNS
    for c in COLUMNS:
        np.testing.assert_array_equal(back[c], tab[c])
    assert back["winding"].dtype.kind == "i"


@given(st.lists(st.floats(allow_nan=False, allow_infinity=True, width=64), min_size=1, max_size=20))
def test_float_format_is_lossless(values):
    text = format_csv({"v": np.array(values)})
    rows = text.splitlines()[1:]
    assert [float(v) for v in rows] == values


def test_zero_duration_run_gives_two_line_csv(tmp_path):
    res = _fig1_result(n_samples=801, t1=0.0)
    path = write_csv(tmp_path / "z.csv", trajectory_table(res), COLUMNS)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].split(",") == list(COLUMNS)


def test_drift_column_bounded_for_numeric_runs():
    g0 = 625 * math.pi
    ss = ScheduleSet(HarmonicSchedule(g0 / 10), HarmonicSchedule(g0 / 20), HarmonicSchedule(g0), Regime.off_resonant(g0))
    res = run_trajectory(math.pi / 3, 0.0, ss, 0.0, 4 * math.pi / g0, 401, method="numeric")
    assert trajectory_table(res)["C_drift"].max() < 1e-8
