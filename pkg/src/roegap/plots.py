"""Figure rendering for report runs (PNG files next to the CSV output)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .spectral import SpectralReport  # noqa: E402

__all__ = ["render_gap_figure", "render_decay_figure", "render_mazur_figure"]


def _finish(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_gap_figure(report: SpectralReport, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    sizes = [c.size for c in report.components]
    lams = [c.lam for c in report.components]
    ax.plot(sizes, lams, "o-", label="lambda = ||A - P||_2")
    for p in sorted({p for c in report.components for p in c.lp}):
        los = [c.lp[p][0] for c in report.components]
        his = [c.lp[p][1] for c in report.components]
        ax.fill_between(sizes, los, his, alpha=0.2, label=f"p = {p:g} interval")
    ax.axhline(report.threshold, color="crimson", ls="--", lw=1,
               label=f"threshold {report.threshold:g}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("component size")
    ax.set_ylabel("restricted norm")
    ax.set_title(title or report.verdict.text, fontsize=9)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_decay_figure(decay, path, title: str = "Markov power decay") -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for d in decay:
        if not d.table:
            continue
        ks = range(1, d.k_stop + 1)
        ax.semilogy(list(ks), list(d.table), lw=1.2,
                    label=f"size {d.size} (lambda {d.lam:.4g})")
        ax.semilogy(list(ks), [d.lam ** k for k in ks], ls=":", lw=0.8, color="gray")
    ax.set_xlabel("power k")
    ax.set_ylabel("||A^k - P||_2")
    ax.set_title(title, fontsize=10)
    if decay:
        ax.legend(fontsize=7)
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def render_mazur_figure(c0_rows: list[dict], transfer_rows: list[dict], path) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4.0))
    ks = [r["k"] for r in c0_rows]
    defects = [r["defect"] for r in c0_rows]
    bounds = [r["bound"] for r in c0_rows]
    if ks:
        axes[0].loglog(ks, defects, "o-", label="measured defect")
        axes[0].loglog(ks, bounds, "--", label="R / k^2 bound")
        slope = (math.log(defects[-1]) - math.log(defects[0])) / (
            math.log(ks[-1]) - math.log(ks[0])) if len(ks) > 1 else float("nan")
        axes[0].set_title(f"slow-decay defect (slope {slope:.3f})", fontsize=9)
    axes[0].set_xlabel("k")
    axes[0].set_ylabel("sup defect")
    axes[0].legend(fontsize=8)
    axes[0].grid(alpha=0.3, which="both")
    if transfer_rows:
        axes[1].plot([r["defect_p"] for r in transfer_rows],
                     [r["defect_2"] for r in transfer_rows], "s-")
    axes[1].set_xlabel("defect in p-norm")
    axes[1].set_ylabel("defect after transport to 2-norm")
    axes[1].set_title("transfer of almost-invariance", fontsize=9)
    axes[1].grid(alpha=0.3)
    return _finish(fig, path)
