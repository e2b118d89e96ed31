"""Figures written next to the CLI's JSON/tab-delimited output."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .search import SearchReport  # noqa: E402

_FILLS = ["white", "0.6", "black", "tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple"]


def plot_kappa_histogram(report: SearchReport, path: str | Path) -> Path:
    """Bar chart of exact κ values met during a search, with both bounds marked."""
    path = Path(path)
    counts = {int(k): v for k, v in report.kappa_histogram.items()}
    fig, ax = plt.subplots(figsize=(5, 3.2))
    if counts:
        ks = sorted(counts)
        ax.bar(ks, [counts[k] for k in ks], color="0.55", edgecolor="black", width=0.7)
        ax.set_xticks(range(0, max(ks + [math.floor(report.theorem_bound)]) + 1))
    ax.axvline(report.conjecture_bound, color="tab:blue", ls="--", lw=1, label=r"$\lfloor n/2 \rfloor$")
    ax.axvline(report.theorem_bound, color="tab:red", ls=":", lw=1, label=r"$2n/3+2$")
    ax.set_xlabel("added automata κ")
    ax.set_ylabel("instances")
    ax.set_title(f"n = {report.n}, {report.strategy}, {report.instances} instances", fontsize=10)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_graph(
    labels: list[str],
    edges,
    path: str | Path,
    colors: list[int] | None = None,
    title: str = "",
    hide_isolated: bool = False,
) -> Path:
    """Nodes on a circle, edges as straight segments, optional fill by color id."""
    path = Path(path)
    nodes = list(range(len(labels)))
    edge_list = [tuple(e) for e in (edges.tolist() if hasattr(edges, "tolist") else edges)]
    if hide_isolated:
        touched = {v for e in edge_list for v in e}
        nodes = [v for v in nodes if v in touched] or nodes
    pos = {}
    for k, v in enumerate(nodes):
        a = 2 * math.pi * k / max(len(nodes), 1)
        pos[v] = (math.cos(a), math.sin(a))
    size = 3 + 0.08 * len(nodes)
    fig, ax = plt.subplots(figsize=(min(size, 12), min(size, 12)))
    for u, v in edge_list:
        if u in pos and v in pos:
            ax.plot([pos[u][0], pos[v][0]], [pos[u][1], pos[v][1]], color="0.3", lw=0.8, zorder=1)
    for v in nodes:
        fill = "white" if colors is None else _FILLS[colors[v] % len(_FILLS)]
        text = "white" if fill == "black" else "black"
        ax.text(
            *pos[v], labels[v], ha="center", va="center", fontsize=8, color=text, zorder=2,
            bbox=dict(boxstyle="square,pad=0.2", fc=fill, ec="black", lw=0.8),
        )
    ax.set_xlim(-1.3, 1.3)
    ax.set_ylim(-1.3, 1.3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
