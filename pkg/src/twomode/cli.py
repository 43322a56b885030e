"""Command-line entry point: ``twomode {simulate,figure,verify,portrait}``.

Output files go to ``--outdir``, else ``$TWOMODE_OUTDIR``, else the current
directory. Exit codes: 0 success, 1 usage or configuration error, 2 failed
verification, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from .characteristic import portrait_surface
from .config import ConfigError, load_config
from .fockoracle import NonConvergenceError
from .presets import get_preset
from .regimes import Regime
from .schedules import IntegrationError
from .tables import COLUMNS, run_trajectory, trajectory_table, write_csv

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
OUTDIR_ENV = "TWOMODE_OUTDIR"

__all__ = ["main", "portrait_table", "figure_tables", "OUTDIR_ENV"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _outdir(args) -> Path:
    return Path(args.outdir or os.environ.get(OUTDIR_ENV) or ".")


def _slug(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_")


def portrait_table(regime: Regime, eta: float | None, grid: int) -> dict[str, np.ndarray]:
    """(r, chi, C) over [0, pi] x [-pi, pi], r varying slowest."""
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    r, chi = np.meshgrid(np.linspace(0, math.pi, grid), np.linspace(-math.pi, math.pi, grid), indexing="ij")
    c = portrait_surface(regime, r, chi, eta)
    return {"r": r.ravel(), "chi": chi.ravel(), "C": np.asarray(c).ravel()}


def figure_tables(figure: int):
    """Run one preset: returns (preset, {series label: table}) or portrait tables."""
    preset = get_preset(figure)
    if preset.kind == "portrait":
        return preset, {label: portrait_table(reg, eta, preset.extra["grid"])
                        for label, reg, eta in preset.portraits}
    tables = {}
    for s in preset.series:
        res = run_trajectory(s.r0, s.phi0, s.schedules, 0.0, s.tau_end / preset.tau_scale,
                             s.n_samples, s.n_atoms, preset.tau_scale)
        tables[s.label] = trajectory_table(res)
    return preset, tables


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    res = run_trajectory(cfg.r0, cfg.phi0, cfg.schedules, cfg.t0, cfg.t1, cfg.n_samples,
                         cfg.n_atoms, cfg.tau_scale, cfg.method, cfg.rtol)
    table = trajectory_table(res, unwrapped=cfg.unwrapped_phase)
    if cfg.output_path:
        out = Path(cfg.output_path)
        if not out.is_absolute():
            out = _outdir(args) / out
    else:
        out = _outdir(args) / f"{Path(args.config).stem}.csv"
    write_csv(out, table, COLUMNS)
    print(out)
    return EXIT_OK


def _cmd_figure(args) -> int:
    preset, tables = figure_tables(args.id)
    outdir = _outdir(args)
    written = []
    for label, tab in tables.items():
        cols = ("r", "chi", "C") if preset.kind == "portrait" else COLUMNS
        written.append(write_csv(outdir / f"fig{preset.figure:02d}_{_slug(label)}.csv", tab, cols))
    if args.svg:
        from . import plotting

        if preset.kind == "portrait":
            for label, tab in tables.items():
                written.append(plotting.portrait_figure(
                    outdir / f"fig{preset.figure:02d}_{_slug(label)}.svg", tab, label))
        elif preset.kind == "bloch":
            written.append(plotting.bloch_figure(outdir / f"fig{preset.figure:02d}.svg", tables))
        else:
            written.append(plotting.phase_figure(outdir / f"fig{preset.figure:02d}.svg", tables,
                                                 preset.tau_label, absolute=preset.figure == 1))
    for p in written:
        print(p)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verification import report_table, run_suites

    checks = run_suites(args.suite)
    out = write_csv(_outdir(args) / f"verify_{args.suite}.csv", report_table(checks))
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}  {c.name}: {c.value:.3e} {c.relation} {c.bound:.3e}")
    print(out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


_PORTRAIT_REGIMES = {"on_resonant", "off_resonant", "external_symmetric", "external_asymmetric"}


def _cmd_portrait(args) -> int:
    name = args.regime.replace("-", "_")
    if name not in _PORTRAIT_REGIMES:
        raise _UsageError(f"unknown regime {args.regime!r}; expected one of {sorted(_PORTRAIT_REGIMES)}")
    if name in ("off_resonant", "external_asymmetric"):
        if args.eta is None:
            raise _UsageError(f"regime {name} needs --eta")
        # only eta enters the surface; the rate itself is arbitrary
        regime = Regime.off_resonant(1.0) if name == "off_resonant" else Regime.external_asymmetric(1.0)
    else:
        regime = Regime(name)
    if args.grid < 2:
        raise _UsageError("--grid must be at least 2")
    table = portrait_table(regime, args.eta, args.grid)
    suffix = f"_eta{args.eta:g}" if args.eta is not None else ""
    out = write_csv(_outdir(args) / f"portrait_{name}{suffix}.csv", table)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twomode", description="Two-mode condensate dynamics and geometric phases.")
    p.add_argument("--outdir", help=f"output directory (default ${OUTDIR_ENV} or .)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    s = sub.add_parser("simulate", help="run a configuration file and write the trajectory CSV")
    s.add_argument("config")
    s.set_defaults(func=_cmd_simulate)
    f = sub.add_parser("figure", help="write the dataset behind one figure")
    f.add_argument("id", type=int, choices=range(1, 12), metavar="ID")
    f.add_argument("--svg", action="store_true", help="also render an SVG")
    f.set_defaults(func=_cmd_figure)
    v = sub.add_parser("verify", help="run self-checks against the exact propagator")
    v.add_argument("suite", choices=("exact-N1", "exact-lambda0", "closedform", "gauge", "all"))
    v.set_defaults(func=_cmd_verify)
    q = sub.add_parser("portrait", help="sample the constant-of-motion surface")
    q.add_argument("regime")
    q.add_argument("--eta", type=float)
    q.add_argument("--grid", type=int, default=61)
    q.set_defaults(func=_cmd_portrait)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError(parser.format_usage().strip())
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergenceError, IntegrationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
