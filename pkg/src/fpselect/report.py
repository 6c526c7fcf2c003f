"""Figure rendering for selection runs: the explored lattice and the method
comparison chart, written to files next to the delimited outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.lines import Line2D

_EXPLORED_FACE = "white"
_SATISFYING_FACE = "#7bafd4"
_BEST_FACE = "#71bc78"
_PRUNED_FACE = "#d9d9d9"
_FRONTIER_COLOR = "#d62728"


def _fmt(value) -> str:
    if value == "inf":
        return "inf"
    return f"{value:.3g}"


def lattice_figure(events: list[dict], max_labels: int = 40):
    """Draw the explored part of the lattice, layered by set size.

    Satisfying nodes are blue, the final best is a green diamond, pruned
    candidates are grey crosses, and the red line marks the satisfiability
    frontier between the satisfying and unsatisfying regions of each layer.
    """
    names = events[0].get("attributes", []) if events else []
    evaluated: dict[tuple, dict] = {}
    pruned: dict[tuple, str] = {}
    best_set: tuple | None = None
    for event in events:
        if event["type"] == "evaluate":
            evaluated[tuple(event["set"])] = event
        elif event["type"] == "prune":
            pruned.setdefault(tuple(event["set"]), event["reason"])
        elif event["type"] == "end" and event["result"] is not None:
            best_set = tuple(event["result"])

    layers: dict[int, list[tuple]] = {}
    for members in list(evaluated) + list(pruned):
        layers.setdefault(len(members), []).append(members)

    fig, ax = plt.subplots(figsize=(max(6, 2.2 * (len(layers) or 1)), 6))
    label_budget = max_labels
    frontier_pts = []
    for size in sorted(layers):
        column = sorted(set(layers[size]))
        # unsatisfying on top, satisfying below: the frontier crosses between
        column.sort(key=lambda m: (m in evaluated and evaluated[m]["satisfying"], m))
        n_unsat = sum(
            1 for m in column if not (m in evaluated and evaluated[m]["satisfying"])
        )
        for slot, members in enumerate(column):
            y = -slot
            if members in evaluated:
                ev = evaluated[members]
                if members == best_set:
                    face, marker, msize = _BEST_FACE, "D", 14
                elif ev["satisfying"]:
                    face, marker, msize = _SATISFYING_FACE, "o", 12
                else:
                    face, marker, msize = _EXPLORED_FACE, "o", 12
                ax.plot(size, y, marker, markersize=msize, markerfacecolor=face,
                        markeredgecolor="black", zorder=3)
                if label_budget > 0:
                    label_budget -= 1
                    text = "{%s}" % ",".join(names[i] if i < len(names) else str(i) for i in members) if members else "{}"
                    ax.annotate(
                        f"{text}\nc={_fmt(ev['cost'])} s={_fmt(ev['sensitivity'])} e={_fmt(ev['efficiency'])}",
                        (size, y), textcoords="offset points", xytext=(0, 9),
                        ha="center", fontsize=7,
                    )
            else:
                ax.plot(size, y, "x", markersize=9, color=_PRUNED_FACE,
                        markeredgewidth=2, zorder=2)
        frontier_pts.append((size, -(n_unsat - 0.5)))

    if any(m in evaluated and evaluated[m]["satisfying"] for column in layers.values() for m in column):
        xs = [p[0] for p in frontier_pts]
        ys = [p[1] for p in frontier_pts]
        ax.plot(xs, ys, color=_FRONTIER_COLOR, linewidth=2, linestyle="--", zorder=1)

    ax.set_xlabel("attribute set size")
    ax.set_yticks([])
    ax.set_xticks(sorted(layers))
    ax.legend(
        handles=[
            Line2D([], [], marker="o", linestyle="", markerfacecolor=_EXPLORED_FACE,
                   markeredgecolor="black", label="explored, not satisfying"),
            Line2D([], [], marker="o", linestyle="", markerfacecolor=_SATISFYING_FACE,
                   markeredgecolor="black", label="satisfying"),
            Line2D([], [], marker="D", linestyle="", markerfacecolor=_BEST_FACE,
                   markeredgecolor="black", label="best (min cost, satisfying)"),
            Line2D([], [], marker="x", linestyle="", color=_PRUNED_FACE, label="pruned"),
            Line2D([], [], color=_FRONTIER_COLOR, linestyle="--", label="satisfiability frontier"),
        ],
        loc="upper left",
        fontsize=8,
    )
    fig.tight_layout()
    return fig


def comparison_figure(rows: list[dict]):
    """Bar chart of the usability cost reached by each method."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    positions = range(len(rows))
    for x, row in zip(positions, rows):
        if row["status"] == "ok":
            ax.bar(x, row["cost"], color=_SATISFYING_FACE, edgecolor="black")
            ax.annotate(
                f"|set|={len(row['set'])}\ns={row['sensitivity']:.3g}",
                (x, row["cost"]), ha="center", va="bottom", fontsize=8,
            )
        else:
            ax.bar(x, 0, color=_PRUNED_FACE)
            ax.annotate(row["status"], (x, 0), ha="center", va="bottom", fontsize=8)
    ax.set_xticks(list(positions))
    ax.set_xticklabels([row["method"] for row in rows])
    ax.set_ylabel("usability cost of selected set")
    fig.tight_layout()
    return fig


def save_figure(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
