"""Matplotlib renderings of diagrams and normalisation runs.

Everything draws onto the non-interactive Agg backend and writes files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .canon import canonical_labelling  # noqa: E402
from .diagram import B, H, X, Z, Diagram  # noqa: E402
from .rewrite import Trace  # noqa: E402

GREEN = "#7bc67b"
RED = "#e06666"
HAD = "#f4d35e"

Pos = Dict[int, Tuple[float, float]]


def layout(d: Diagram, seed: int = 0) -> Pos:
    """Inputs along the top, outputs along the bottom, the rest spring-placed."""
    g = nx.MultiGraph()
    order = canonical_labelling(d).order if len(d) else []
    g.add_nodes_from(order)
    g.add_edges_from(e for e in d.edges() if e[0] != e[1])
    fixed: Pos = {}
    for row, legs in ((1.0, d.inputs), (-1.0, d.outputs)):
        n = len(legs)
        for i, v in enumerate(legs):
            fixed[v] = ((i + 0.5) / n * 2 - 1 if n else 0.0, row)
    if not len(g):
        return {}
    pos = nx.spring_layout(
        g,
        pos=fixed or None,
        fixed=list(fixed) or None,
        seed=seed,
        k=1.2 / max(len(g), 1) ** 0.5,
    )
    return {v: (float(x), float(y)) for v, (x, y) in pos.items()}


def draw_diagram(d: Diagram, path, title: Optional[str] = None, seed: int = 0) -> Path:
    """Draw ``d`` with green/red spiders, yellow Hadamard squares and boundary dots."""
    pos = layout(d, seed)
    fig, ax = plt.subplots(figsize=(6, 6))
    for u, v in d.edges():
        if u == v:
            x, y = pos[u]
            ax.add_patch(plt.Circle((x, y + 0.05), 0.05, fill=False, lw=1))
            continue
        (x0, y0), (x1, y1) = pos[u], pos[v]
        m = d.multiplicity(u, v)
        ax.plot([x0, x1], [y0, y1], color="black", lw=1 + 0.8 * (m - 1), zorder=1)
    style = {
        Z: dict(marker="o", s=260, c=GREEN),
        X: dict(marker="o", s=260, c=RED),
        H: dict(marker="s", s=140, c=HAD),
        B: dict(marker=".", s=60, c="black"),
    }
    for v in d.vertices():
        x, y = pos[v]
        ax.scatter([x], [y], edgecolors="black", linewidths=0.8, zorder=2, **style[d.type(v)])
        if d.is_spider(v) and not d.phase(v).is_zero():
            ax.annotate(str(d.phase(v)), (x, y), ha="center", va="center", fontsize=7, zorder=3)
    ax.set_axis_off()
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def measure_curve(trace: Trace, start: Diagram) -> Sequence[Tuple[int, int, int]]:
    """(vertices, edges, Hadamards) before the first step and after each step."""
    out = [start.measure()]
    for step in trace.steps:
        after = step.after
        if after is None:
            raise ValueError("trace steps carry no diagrams; curves need a fresh normalisation run")
        out.append(after.measure())
    return out


def plot_measure_curve(trace: Trace, start: Diagram, path, title: Optional[str] = None) -> Path:
    curve = measure_curve(trace, start)
    steps = range(len(curve))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for i, label in enumerate(("vertices", "edges", "Hadamards")):
        ax.plot(steps, [c[i] for c in curve], label=label, lw=1.2)
    ax.set_xlabel("rewrite step")
    ax.set_ylabel("count")
    ax.legend()
    if title:
        ax.set_title(title)
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
