"""Implication poset over a family of matrices, as files.

For every ordered pair (A, B) of the given matrices the singleton
implication {A} => B is decided.  Mutually implying matrices collapse into
one node; the remaining strict implications are reduced to covering edges
and drawn as a Hasse diagram (stronger properties lower).  The full
verdict table goes to a CSV file next to the figure.
"""

from __future__ import annotations

import csv
import os

from .engine import decide
from .matrices import ExtendedMatrix, MatrixSet


def pairwise_decisions(named: list[tuple[str, ExtendedMatrix]]) -> dict[tuple[str, str], str]:
    """verdicts[(a, b)] = decide({A}, B).verdict for all ordered pairs."""
    verdicts = {}
    for a, mat_a in named:
        mats = MatrixSet((mat_a,), mat_a.pointed)
        for b, mat_b in named:
            verdicts[(a, b)] = decide(mats, mat_b).verdict
    return verdicts


def poset_structure(names: list[str], verdicts: dict[tuple[str, str], str]):
    """Collapse mutual implications and compute covering edges.

    Returns (classes, covers): classes is a list of name lists, covers a
    list of (lower, upper) class-index pairs, lower being the stronger
    side (it implies the upper)."""
    holds = {pair for pair, v in verdicts.items() if v == "holds"}
    classes: list[list[str]] = []
    class_of: dict[str, int] = {}
    for name in names:
        for idx, cls in enumerate(classes):
            rep = cls[0]
            if (name, rep) in holds and (rep, name) in holds:
                cls.append(name)
                class_of[name] = idx
                break
        else:
            class_of[name] = len(classes)
            classes.append([name])
    below = set()
    for a in names:
        for b in names:
            ca, cb = class_of[a], class_of[b]
            if ca != cb and (a, b) in holds:
                below.add((ca, cb))
    covers = [(lo, hi) for (lo, hi) in below
              if not any((lo, mid) in below and (mid, hi) in below
                         for mid in range(len(classes)))]
    return classes, sorted(covers)


def _levels(num_classes: int, covers: list[tuple[int, int]]) -> list[int]:
    """Longest-path height of each class above the minimal ones."""
    heights = [0] * num_classes
    changed = True
    while changed:
        changed = False
        for lo, hi in covers:
            if heights[hi] < heights[lo] + 1:
                heights[hi] = heights[lo] + 1
                changed = True
    return heights


def draw_hasse(classes: list[list[str]], covers: list[tuple[int, int]], path: str) -> None:
    """Render the diagram to an image file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    heights = _levels(len(classes), covers)
    by_level: dict[int, list[int]] = {}
    for idx, h in enumerate(heights):
        by_level.setdefault(h, []).append(idx)
    pos = {}
    for h, members in by_level.items():
        for slot, idx in enumerate(members):
            pos[idx] = (slot - (len(members) - 1) / 2, h)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for lo, hi in covers:
        (x1, y1), (x2, y2) = pos[lo], pos[hi]
        ax.plot([x1, x2], [y1, y2], color="gray", zorder=1)
    for idx, cls in enumerate(classes):
        x, y = pos[idx]
        ax.text(x, y, ", ".join(cls), ha="center", va="center", zorder=2,
                bbox=dict(boxstyle="round,pad=0.35", facecolor="white", edgecolor="black"))
    ax.set_title("implication order (stronger below)")
    ax.set_axis_off()
    margin = 0.6
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    ax.set_xlim(min(xs) - margin - 0.4, max(xs) + margin + 0.4)
    ax.set_ylim(min(ys) - margin, max(ys) + margin)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(named: list[tuple[str, ExtendedMatrix]], out_dir: str) -> dict:
    """Decide all pairs and write decisions.csv plus hasse.png into out_dir.

    Returns a summary dict (also used for the CLI's JSON output)."""
    os.makedirs(out_dir, exist_ok=True)
    names = [name for name, _ in named]
    verdicts = pairwise_decisions(named)
    classes, covers = poset_structure(names, verdicts)

    csv_path = os.path.join(out_dir, "decisions.csv")
    with open(csv_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["lhs", "rhs", "verdict"])
        for a in names:
            for b in names:
                writer.writerow([a, b, verdicts[(a, b)]])

    figure_path = os.path.join(out_dir, "hasse.png")
    draw_hasse(classes, covers, figure_path)

    return {
        "matrices": names,
        "mode": "pointed" if named and named[0][1].pointed else "non_pointed",
        "decisions": [
            {"lhs": a, "rhs": b, "verdict": verdicts[(a, b)]}
            for a in names for b in names],
        "classes": classes,
        "covers": [list(c) for c in covers],
        "files": {"csv": csv_path, "figure": figure_path},
    }
