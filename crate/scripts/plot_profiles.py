#!/usr/bin/env python3
"""Plot W(x,-x) and W(x,0) per charge from `landau1d landscape profiles`."""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv")
    p.add_argument("-o", "--out", default="profiles.png")
    args = p.parse_args()

    df = pd.read_csv(args.csv)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for z, g in df.groupby("z", sort=True):
        axes[0].plot(g["x"], g["w_opposite"], label=f"Z = {z:g}")
        axes[1].plot(g["x"], g["w_one_at_nucleus"], label=f"Z = {z:g}")
    axes[0].set_title("W(x, -x)")
    axes[1].set_title("W(x, 0)")
    for ax in axes:
        ax.set_xlabel("x")
        ax.axhline(0.0, color="0.7", lw=0.5)
    axes[0].set_ylabel("W")
    axes[1].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
