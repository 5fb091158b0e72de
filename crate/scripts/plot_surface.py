#!/usr/bin/env python3
"""Contour plot of W(x, y) from `landau1d surface`, with critical points
from `landau1d landscape critical-points` overlaid when given."""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

MARKERS = {"minimum": "o", "saddle": "x", "maximum": "^", "degenerate": "s"}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv")
    p.add_argument("--points", help="critical-points CSV")
    p.add_argument("--levels", type=int, default=40)
    p.add_argument("-o", "--out", default="surface.png")
    args = p.parse_args()

    df = pd.read_csv(args.csv)
    xs = np.sort(df["x"].unique())
    ys = np.sort(df["y"].unique())
    w = df.pivot(index="y", columns="x", values="w").loc[ys, xs].to_numpy()

    fig, ax = plt.subplots(figsize=(6, 5))
    cs = ax.contourf(xs, ys, w, levels=args.levels, cmap="viridis")
    ax.contour(xs, ys, w, levels=args.levels, colors="k", linewidths=0.2)
    fig.colorbar(cs, ax=ax, label="W")
    if args.points:
        cp = pd.read_csv(args.points)
        for kind, g in cp.groupby("kind"):
            ax.scatter(g["x"], g["y"], marker=MARKERS.get(kind, "+"), color="r", label=kind)
        ax.legend(fontsize="small")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
