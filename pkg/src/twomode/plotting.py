"""SVG rendering of figure datasets. Only reads the same tables the CSV files hold."""

from __future__ import annotations

from pathlib import Path

import numpy as np

_STYLES = {"thick solid": dict(ls="-", lw=3.0), "solid": dict(ls="-", lw=1.2),
           "dashed": dict(ls="--", lw=1.2), "dotted": dict(ls=":", lw=1.5),
           "dash-dot": dict(ls="-.", lw=1.2), "asymmetric wells": dict(ls=":", lw=1.0),
           "black": dict(color="k"), "grey": dict(color="0.55", ls="--")}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def phase_figure(path, tables: dict[str, dict], tau_label: str, absolute: bool = False) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, tab in tables.items():
        y = np.where(tab["defined"] == 1, tab["phiG"], np.nan)
        ax.plot(tab["tau"], np.abs(y) if absolute else y, label=label, **_STYLES.get(label, {}))
    ax.set_xlabel(f"tau = {tau_label}")
    ax.set_ylabel("|phi_G|" if absolute else "phi_G")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return Path(path)


def bloch_figure(path, tables: dict[str, dict]) -> Path:
    plt = _pyplot()
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="3d")
    u, v = np.meshgrid(np.linspace(0, 2 * np.pi, 40), np.linspace(0, np.pi, 20))
    ax.plot_wireframe(np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v), color="0.85", lw=0.4)
    for label, tab in tables.items():
        style = _STYLES.get(label, {})
        ax.plot(tab["nx"], tab["ny"], tab["nz"], label=label, **style)
        for i in (0, -1):
            ax.quiver(0, 0, 0, tab["nx"][i], tab["ny"][i], tab["nz"][i], color=style.get("color", "C0"))
    ax.set_box_aspect((1, 1, 1))
    ax.legend(fontsize=8)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return Path(path)


def portrait_figure(path, table: dict, title: str) -> Path:
    plt = _pyplot()
    r, chi, c = table["r"], table["chi"], table["C"]
    n_r = np.unique(r).size
    shape = (n_r, r.size // n_r)
    fig, ax = plt.subplots(figsize=(5, 4))
    cs = ax.contour(chi.reshape(shape), r.reshape(shape), c.reshape(shape), levels=15)
    ax.clabel(cs, fontsize=6)
    ax.set_xlabel("phi - delta")
    ax.set_ylabel("r")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return Path(path)
