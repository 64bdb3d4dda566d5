"""Figure rendering for the CLI report path.

Every suite command can drop PNG figures next to its CSV/JSON output; the
figures are summaries (ratio histograms, scatter comparisons), not part of
the machine-readable contract.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_norms_figure",
    "save_duality_figure",
    "save_equivalence_figure",
    "save_tent_figure",
    "save_multiplier_figure",
]


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path


def save_norms_figure(path: str | Path, norms: dict[str, float]) -> Path:
    names = list(norms)
    vals = [norms[k] for k in names]
    fig, ax = plt.subplots(figsize=(1.2 + 0.9 * len(names), 3.2))
    ax.bar(range(len(names)), vals, color="#4878cf")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("norm value")
    ax.set_title("requested norms")
    return _finish(fig, path)


def save_duality_figure(path: str | Path, rows: list[dict]) -> Path:
    constructions = sorted({r["construction"] for r in rows})
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))
    for c in constructions:
        ratios = [r["ratio"] for r in rows if r["construction"] == c]
        axes[0].hist(ratios, bins=24, alpha=0.6, label=c)
    axes[0].axvline(2.0, color="crimson", linestyle="--", linewidth=1, label="upper bound")
    axes[0].set_xlabel("pairing / (nt_norm * carleson_norm)")
    axes[0].set_ylabel("count")
    axes[0].legend(fontsize=7)
    for c in constructions:
        pts = [(r["seed"], r["ratio"]) for r in rows if r["construction"] == c]
        if pts:
            xs, ys = zip(*pts)
            axes[1].scatter(xs, ys, s=8, alpha=0.7, label=c)
    axes[1].axhline(2.0, color="crimson", linestyle="--", linewidth=1)
    axes[1].set_xlabel("seed")
    axes[1].set_ylabel("ratio")
    fig.suptitle("duality pairing ratios")
    return _finish(fig, path)


def save_equivalence_figure(path: str | Path, rows: list[dict]) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    for ax, suite in zip(axes, ("nt", "carleson")):
        sub = [r for r in rows if r["suite"] == suite]
        if not sub:
            ax.set_axis_off()
            continue
        dy = np.array([r["dyadic"] for r in sub])
        co = np.array([r["continuum"] for r in sub])
        ax.scatter(dy, co, s=8, alpha=0.6, color="#4878cf")
        lim = max(dy.max(initial=1e-9), co.max(initial=1e-9)) * 1.05
        ax.plot([0, lim], [0, lim], color="gray", linewidth=1, linestyle="--")
        ax.set_xlabel("dyadic norm")
        ax.set_ylabel("continuum norm")
        ax.set_title(f"{suite} comparison")
    fig.suptitle("dyadic vs continuum norms")
    return _finish(fig, path)


def save_tent_figure(path: str | Path, rows: list[dict]) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.2))
    for depth in sorted({r["depth"] for r in rows}):
        sub = [r for r in rows if r["depth"] == depth]
        ax.plot([r["seed"] for r in sub], [r["ratio"] for r in sub], marker="o", markersize=3, linewidth=0.8, label=f"depth {depth}")
    ax.set_xlabel("seed")
    ax.set_ylabel("carleson / area ratio")
    ax.set_title("tent-space comparison")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_multiplier_figure(path: str | Path, report: dict) -> Path:
    vals = report["candidate_values"]
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.plot(range(len(vals)), sorted(vals), marker="o", markersize=3, linewidth=0.8, color="#4878cf", label="candidates")
    ax.axhline(report["carleson_r_dyadic_norm"], color="seagreen", linestyle="--", linewidth=1, label="dyadic carleson norm")
    ax.axhline(report["carleson_r_continuum_norm"], color="darkorange", linestyle=":", linewidth=1, label="continuum carleson norm")
    if report.get("modified_carleson") is not None:
        ax.axhline(report["modified_carleson"], color="purple", linestyle="-.", linewidth=1, label="modified carleson")
    ax.set_xlabel("candidate (sorted)")
    ax.set_ylabel("lower estimate")
    ax.set_title("multiplier norm lower estimates")
    ax.legend(fontsize=7)
    return _finish(fig, path)
