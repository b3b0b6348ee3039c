"""Figures rendered next to the CSV outputs (headless Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (6.4, 4.0)
DPI = 120


def _finish(fig, ax, path) -> Path:
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def plot_search(report, path) -> Path:
    """Objective against ``|R|`` for the guided and control arms."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if report.pipeline == "thm3":
        per_h = report.diagnostics["per_h"]
        labels = [f"{p['label']} (phi={p['phi']:.2f})" for p in per_h]
        x = np.arange(len(per_h))
        ax.bar(x - 0.2, [p["main_term"] for p in per_h], width=0.4, label="main term")
        ax.bar(x + 0.2, [p["max_value"] for p in per_h], width=0.4, label="max Re(e^-iphi log L)")
        ax.set_xticks(x, labels, rotation=15)
        ax.legend(frameon=False)
        return _finish(fig, ax, path)
    ctl_R, ctl_v = [], []
    for arm in report.control:
        for c in arm["points"]:
            ctl_R.append(c["abs_R"])
            ctl_v.append(c["objective"])
    g_R = [c["abs_R"] for c in report.guided]
    g_v = [c["objective"] for c in report.guided]
    ax.scatter(ctl_R, ctl_v, s=10, alpha=0.6, label="control")
    ax.scatter(g_R, g_v, s=14, marker="^", label="guided")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("|R|")
    ax.set_ylabel("objective")
    ax.legend(frameon=False)
    return _finish(fig, ax, path)


def plot_appendix(entries, path) -> Path:
    """Ratios of computed prime sums to their predicted leading terms."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    rows = [e for e in entries if e.get("ratio") is not None]
    names = [e["id"] + (f"[{e['h']}]" if "h" in e else "") for e in rows]
    ax.bar(np.arange(len(rows)), [e["ratio"] for e in rows])
    ax.axhline(1.0, color="k", lw=0.8)
    ax.set_xticks(np.arange(len(rows)), names)
    ax.set_ylabel("computed / predicted")
    return _finish(fig, ax, path)


def plot_alignment(problem, result, path, span: float | None = None) -> Path:
    """Alignment objective around the minimiser."""
    span = span if span is not None else 50 * result.grid_step
    t = np.linspace(max(problem.T1, result.t_star - span), min(problem.T2, result.t_star + span), 2001)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(t, problem.objective(t), lw=0.8)
    ax.axhline(result.chen_bound, color="r", lw=0.8, label="Chen bound")
    ax.axvline(result.t_star, color="k", lw=0.6, ls=":")
    ax.set_xlabel("t")
    ax.set_ylabel("objective")
    ax.legend(frameon=False)
    return _finish(fig, ax, path)
