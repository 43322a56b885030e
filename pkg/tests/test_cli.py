import math

import numpy as np
import pytest

from twomode.cli import OUTDIR_ENV, main
from twomode.tables import COLUMNS, read_csv

RUN = """\
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
n_samples = 201

[output]
tau_scale = omega_a0
"""


@pytest.fixture
def cfg(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(RUN)
    return path


def test_simulate_writes_csv(tmp_path, cfg):
    out = tmp_path / "out"
    assert main(["--outdir", str(out), "simulate", str(cfg)]) == 0
    tab = read_csv(out / "run.csv")
    assert tuple(tab) == COLUMNS
    assert tab["t"].size == 201
    assert tab["tau"][-1] == pytest.approx(8 * math.pi)
    assert tab["winding"][-1] == 2


def test_outdir_from_environment(tmp_path, cfg, monkeypatch):
    monkeypatch.setenv(OUTDIR_ENV, str(tmp_path / "env"))
    assert main(["simulate", str(cfg)]) == 0
    assert (tmp_path / "env" / "run.csv").is_file()


def test_explicit_outdir_beats_environment(tmp_path, cfg, monkeypatch):
    monkeypatch.setenv(OUTDIR_ENV, str(tmp_path / "env"))
    assert main(["--outdir", str(tmp_path / "flag"), "simulate", str(cfg)]) == 0
    assert (tmp_path / "flag" / "run.csv").is_file()
    assert not (tmp_path / "env").exists()


def test_bad_config_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text(RUN.replace("r0_rad = pi/2", "r0_rad = 7"))
    assert main(["--outdir", str(tmp_path), "simulate", str(path)]) == 1
    assert "bad.ini:" in capsys.readouterr().err
    assert not (tmp_path / "bad.csv").exists()


def test_missing_config_file_exits_1(tmp_path):
    assert main(["--outdir", str(tmp_path), "simulate", str(tmp_path / "nope.ini")]) == 1


@pytest.mark.parametrize("argv", [[], ["verify", "everything"], ["figure", "12"], ["launch"],
                                  ["portrait", "sideways"], ["portrait", "on_resonant", "--grid", "1"]])
def test_usage_errors_exit_1(argv, tmp_path):
    assert main(["--outdir", str(tmp_path)] + argv) == 1


def test_off_resonant_portrait_needs_eta(tmp_path, capsys):
    assert main(["--outdir", str(tmp_path), "portrait", "off_resonant"]) == 1
    assert "--eta" in capsys.readouterr().err


@pytest.mark.parametrize("suite", ["closedform", "gauge"])
def test_verify_suites_pass(suite, tmp_path):
    assert main(["--outdir", str(tmp_path), "verify", suite]) == 0
    rep = read_csv(tmp_path / f"verify_{suite}.csv")
    assert len(next(iter(rep.values()))) > 0


def test_portrait_on_resonant_values(tmp_path):
    assert main(["--outdir", str(tmp_path), "portrait", "on_resonant", "--grid", "5"]) == 0
    tab = read_csv(tmp_path / "portrait_on_resonant.csv")
    np.testing.assert_allclose(tab["C"], np.sin(tab["r"]) * np.cos(tab["chi"]), atol=1e-15)


def test_portrait_off_resonant_point(tmp_path):
    assert main(["--outdir", str(tmp_path), "portrait", "off_resonant", "--eta", "2"]) == 0
    tab = read_csv(tmp_path / "portrait_off_resonant_eta2.csv")
    assert tab["C"].size == 61 * 61
    i = np.flatnonzero(np.isclose(tab["r"], math.pi / 3) & np.isclose(tab["chi"], 0.0))
    assert i.size == 1
    assert tab["C"][i[0]] == pytest.approx(2 * math.sin(math.pi / 3) - 0.5, abs=1e-14)


def test_figure_8_series(tmp_path):
    assert main(["--outdir", str(tmp_path), "figure", "8"]) == 0
    names = sorted(p.name for p in tmp_path.glob("fig08_*.csv"))
    assert names == ["fig08_eta_0_1.csv", "fig08_eta_2.csv", "fig08_eta_40.csv"]


def test_figure_4_south_pole_series_is_null_or_undefined(tmp_path):
    assert main(["--outdir", str(tmp_path), "figure", "4"]) == 0
    tab = read_csv(tmp_path / "fig04_thick_solid.csv")
    ok = tab["defined"] == 1
    assert np.abs(tab["phiG"][ok]).max() < 1e-9


def test_figure_svg(tmp_path):
    assert main(["--outdir", str(tmp_path), "figure", "1", "--svg"]) == 0
    svg = tmp_path / "fig01.svg"
    assert svg.is_file() and svg.read_text().lstrip().startswith("<?xml")
