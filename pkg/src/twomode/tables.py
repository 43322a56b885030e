"""Trajectory tables: the per-sample columns written to CSV, and a lossless reader."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .characteristic import Trajectory, solve
from .phases import PhaseRecord, compute_phases
from .schedules import ScheduleSet

COLUMNS = ("t", "tau", "r", "phi_unwrapped", "delta", "nx", "ny", "nz", "deltaN",
           "phiT", "phiD", "phiG", "winding", "defined", "C_drift")
INT_COLUMNS = ("winding", "defined")

__all__ = ["COLUMNS", "RunResult", "run_trajectory", "trajectory_table", "format_csv",
           "write_csv", "read_csv"]


@dataclass(frozen=True)
class RunResult:
    trajectory: Trajectory
    phases: PhaseRecord
    n_atoms: int
    tau_scale: float


def run_trajectory(r0: float, phi0: float, ss: ScheduleSet, t0: float, t1: float, n_samples: int,
                   n_atoms: int = 1, tau_scale: float = 1.0, method: str = "closed_form",
                   rtol: float = 1e-10) -> RunResult:
    """Solve the characteristic equations and attach all phases."""
    traj = solve(r0, phi0, ss, t0, t1, n_samples if t1 > t0 else 1, method=method, rtol=rtol)
    if traj.t.size == 1:
        z = np.zeros(1)
        rec = PhaseRecord(traj.t, z, z.copy(), z.copy(), np.zeros(1, dtype=int),
                          np.ones(1, dtype=bool), z.copy())
    else:
        rec = compute_phases(traj, n_atoms)
    return RunResult(traj, rec, n_atoms, tau_scale)


def trajectory_table(res: RunResult, unwrapped: bool = False) -> dict[str, np.ndarray]:
    traj, rec = res.trajectory, res.phases
    vec = traj.bloch_vector
    return {
        "t": traj.t,
        "tau": res.tau_scale * (traj.t - traj.t0),
        "r": traj.r,
        "phi_unwrapped": traj.phi,
        "delta": traj.delta,
        "nx": vec[:, 0], "ny": vec[:, 1], "nz": vec[:, 2],
        "deltaN": res.n_atoms * traj.x,
        "phiT": rec.phi_T, "phiD": rec.phi_D,
        "phiG": rec.phi_G_unwrapped if unwrapped else rec.phi_G,
        "winding": rec.winding.astype(int),
        "defined": rec.defined.astype(int),
        "C_drift": traj.constant_drift(),
    }


def _fmt(v) -> str:
    return "%.17g" % v


def format_csv(table: dict[str, np.ndarray], columns=None) -> str:
    """Header plus one row per sample; floats use 17 significant digits."""
    columns = tuple(columns or table.keys())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    n = len(next(iter(table.values())))
    cols = []
    for c in columns:
        arr = np.asarray(table[c])
        if arr.dtype.kind in "iub":
            cols.append([str(int(v)) for v in arr])
        elif arr.dtype.kind in "OU":
            cols.append([str(v) for v in arr])
        else:
            cols.append([_fmt(v) for v in arr])
    for i in range(n):
        w.writerow([col[i] for col in cols])
    return buf.getvalue()


def write_csv(path, table: dict[str, np.ndarray], columns=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(table, columns))
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns as arrays: the known integer columns as int, others as float when they parse."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        raw = [row[j] for row in body]
        if name in INT_COLUMNS:
            out[name] = np.array([int(v) for v in raw], dtype=int)
        else:
            try:
                out[name] = np.array([float(v) for v in raw], dtype=float)
            except ValueError:
                out[name] = np.array(raw, dtype=object)
    return out
