#!/usr/bin/env python3
"""Overlay one or more `landau1d potential` tables (columns x,value)."""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv", nargs="+")
    p.add_argument("--logy", action="store_true")
    p.add_argument("-o", "--out", default="potentials.png")
    args = p.parse_args()

    fig, ax = plt.subplots(figsize=(6, 4))
    for path in args.csv:
        df = pd.read_csv(path)
        ax.plot(df["x"], df["value"], label=Path(path).stem)
    if args.logy:
        ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
