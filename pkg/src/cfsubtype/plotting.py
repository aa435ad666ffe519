"""Scatter plot of bench timings against pair size."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import BenchRecord  # noqa: E402
from .subtype import Verdict  # noqa: E402

_COLOURS = {"valid": "tab:blue", "invalid": "tab:orange"}


def plot_bench(records: Sequence[BenchRecord], path: str | Path, title: str = "") -> None:
    """Running time (ms, log scale) against AST nodes; timeouts drawn as crosses."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    kinds = list(dict.fromkeys(r.kind for r in records))
    for kind in kinds:
        colour = _COLOURS.get(kind, "tab:gray")
        done = [r for r in records if r.kind == kind and r.verdict is not Verdict.UNKNOWN]
        late = [r for r in records if r.kind == kind and r.verdict is Verdict.UNKNOWN]
        if done:
            ax.scatter([r.nodes for r in done], [max(r.micros, 1) / 1000 for r in done],
                       s=10, alpha=0.6, color=colour, label=kind)
        if late:
            ax.scatter([r.nodes for r in late], [max(r.micros, 1) / 1000 for r in late],
                       s=28, marker="x", color=colour, label=f"{kind} (timeout)")
    ax.set_yscale("log")
    ax.set_xlabel("AST nodes (both types)")
    ax.set_ylabel("time (ms)")
    if title:
        ax.set_title(title)
    if records:
        ax.legend(loc="upper left", fontsize="small")
    ax.grid(True, which="major", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
