"""Optional SVG figures next to the JSON/CSV output (matplotlib, Agg backend).

SVG ids and the date stamp are pinned so reruns give identical files.
"""
from __future__ import annotations

import os

import numpy as np


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams.update({"svg.hashsalt": "huplab", "font.size": 9,
                                "axes.spines.top": False, "axes.spines.right": False})
    return plt


def _save(fig, out, name):
    path = os.path.join(out, name)
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    fig.clear()
    return path


def _density_table(out):
    path = os.path.join(out, "density.csv")
    if not os.path.exists(path):
        return None
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def check_figure(report, out):
    plt = _plt()
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.4))
    labels = ["i", "ii", "iii", "iv"]
    code = {"pass": 1.0, "untested": 0.5, "fail": 0.0}
    a1.bar(labels, [code[report["hypotheses"][k]["status"]] for k in labels], color="0.4")
    a1.set_yticks([0, 0.5, 1], ["fail", "untested", "pass"])
    a1.set_title(f"hypotheses, verdict: {report['verdict']}")
    d = _density_table(out)
    if d is not None:
        a2.plot(d[:, 0], d[:, 3], "k-", lw=1, label="Re g")
        a2.plot(d[:, 0], d[:, 4], "k--", lw=1, label="Im g")
        a2.set_xlabel("curve parameter t")
        a2.legend(frameon=False)
        a2.set_title("attached density")
    else:
        a2.axis("off")
    return [_save(fig, out, "check.svg")]


def counterexample_figure(report, out):
    plt = _plt()
    d = _density_table(out)
    fig, ax = plt.subplots(figsize=(4, 4))
    sc = ax.scatter(d[:, 1], d[:, 2], c=np.hypot(d[:, 3], d[:, 4]), s=12, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="|g|")
    ax.set_aspect("equal")
    ax.set_title("counterexample density on the curve")
    return [_save(fig, out, "counterexample.svg")]


def scan_figure(report, out):
    plt = _plt()
    d = np.loadtxt(os.path.join(out, "scan.csv"), delimiter=",", skiprows=1, usecols=(0, 1), ndmin=2)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.plot(d[:, 0], d[:, 1], "k.-", lw=0.8, ms=3)
    ax.set_xlabel(r"$\rho$")
    ax.set_ylabel(r"$\tau(\tilde t_\rho)$")
    return [_save(fig, out, "rotation_scan.svg")]


def potential_figure(report, out):
    plt = _plt()
    pts, vals = report["points"], report["values"]
    fig, ax = plt.subplots(figsize=(4.5, 4))
    sc = ax.scatter(pts[:, 0], pts[:, 1], c=np.abs(vals), s=14, cmap="magma")
    fig.colorbar(sc, ax=ax, label=r"$|\Phi g|$")
    ax.set_aspect("equal")
    return [_save(fig, out, "potential.svg")]


def spectrum_figure(report, out):
    plt = _plt()
    tab = report["table"]
    fig, ax = plt.subplots(figsize=(4.5, 3))
    ax.vlines(tab.values, 0, 1, color="k", lw=0.8)
    ax.set_yticks([])
    ax.set_xlabel("Dirichlet eigenvalue")
    return [_save(fig, out, "spectrum.svg")]


FIGURES = {"check": check_figure, "counterexample": counterexample_figure,
           "rotation-scan": scan_figure, "potential": potential_figure, "spectrum": spectrum_figure}
