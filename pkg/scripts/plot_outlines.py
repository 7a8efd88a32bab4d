#!/usr/bin/env python3
"""Draw a panel grid of near-optimal 2D outlines from bench CSV exports.

Each outline file is a two-column CSV (x, y header) written by the `report`
or `run --planar K` subcommands under `<out>/outlines/`. Panels are grouped
by dimension pair; the planar reference is drawn as a filled region and each
method's outline as a line.

Usage:
    python scripts/plot_outlines.py --outlines out/outlines --out panels.png
"""

from __future__ import annotations

import argparse
import re
from collections import defaultdict
from pathlib import Path

import numpy as np

FILE_RE = re.compile(r"run(?P<run>\d+)_(?P<i>\d+)-(?P<j>\d+)_(?P<name>.+)\.csv$")

STYLE = {
    "reference": dict(color="#9ecae1", fill=True),
    "funplex": dict(color="#d62728", fill=False),
    "spores": dict(color="#2ca02c", fill=False),
    "random_directions": dict(color="#7f7f7f", fill=False),
}


def load_outline(path) -> np.ndarray:
    """Load one outline CSV as an (n, 2) vertex array."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    return data


def collect(outline_dir: Path) -> dict:
    panels: dict[tuple, dict[str, np.ndarray]] = defaultdict(dict)
    for path in sorted(outline_dir.glob("*.csv")):
        match = FILE_RE.search(path.name)
        if not match:
            continue
        key = (int(match["run"]), int(match["i"]), int(match["j"]))
        panels[key][match["name"]] = load_outline(path)
    return panels


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outlines", required=True, help="directory of outline CSVs")
    parser.add_argument("--out", default="outlines.png", help="output image path")
    args = parser.parse_args(argv)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = collect(Path(args.outlines))
    if not panels:
        print("no outline files found")
        return 1
    n = len(panels)
    ncols = min(3, n)
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.6 * nrows), squeeze=False)
    for ax in axes.ravel()[n:]:
        ax.axis("off")
    for ax, (key, outlines) in zip(axes.ravel(), sorted(panels.items())):
        run, i, j = key
        for name, vertices in outlines.items():
            style = STYLE.get(name, dict(color="black", fill=False))
            closed = np.vstack([vertices, vertices[:1]])
            if style["fill"]:
                ax.fill(closed[:, 0], closed[:, 1], color=style["color"], alpha=0.6,
                        label=name, zorder=1)
            else:
                ax.plot(closed[:, 0], closed[:, 1], color=style["color"], label=name,
                        lw=1.6, zorder=2)
        ax.set_title(f"run {run}: dims {i}-{j}")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=140)
    print(f"wrote {args.out} with {n} panel(s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
