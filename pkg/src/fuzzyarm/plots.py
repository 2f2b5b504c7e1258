"""SVG chart export: stage contributions and servo trajectories.

matplotlib is imported lazily so batch runs that skip plotting do not pay
its startup cost.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .metrics import STAGES, AggregateReport


def contribution_chart(report: AggregateReport, path: str | Path) -> None:
    """Grouped bars: per-stage share of total time and of aggregated error."""
    from matplotlib.figure import Figure

    labels = [s.upper() for s in STAGES]
    time_pct = [report.time_contribution_pct[s] for s in STAGES]
    error_pct = [report.errors.percentages[s] for s in STAGES]

    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot(111)
    x = range(len(labels))
    width = 0.38
    ax.bar([i - width / 2 for i in x], time_pct, width, label="time %", color="#4878cf")
    ax.bar([i + width / 2 for i in x], error_pct, width, label="error %", color="#d65f5f")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels)
    ax.set_ylabel("contribution (%)")
    ax.set_title("Stage contribution to total time and aggregated error")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")


def trajectory_chart(
    points: Sequence[tuple[float, float]],
    scene_snapshot: dict,
    path: str | Path,
    title: str = "Servo trajectory",
) -> None:
    """Scene boxes plus the effector path, in pixel coordinates (y down)."""
    from matplotlib.figure import Figure
    from matplotlib.patches import Rectangle

    fig = Figure(figsize=(8, 4.5))
    ax = fig.add_subplot(111)
    w, h = scene_snapshot["frame"]
    for label, (x0, y0, x1, y1) in scene_snapshot["objects"].items():
        ax.add_patch(Rectangle((x0, y0), x1 - x0, y1 - y0, fill=False, edgecolor="#4878cf"))
        ax.annotate(label, (x0, y0 - 4), fontsize=8, color="#4878cf")
    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, "-", color="#d65f5f", linewidth=1.2)
        ax.plot(xs[0], ys[0], "o", color="#d65f5f", markersize=4)
        ax.plot(xs[-1], ys[-1], "x", color="#222222", markersize=7)
    ax.set_xlim(0, w)
    ax.set_ylim(h, 0)  # screen coordinates: y grows downward
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
