#!/usr/bin/env python3
"""Binding margin against Z with error bars, from `landau1d zc --trace`."""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv")
    p.add_argument("-o", "--out", default="zc_trace.png")
    args = p.parse_args()

    df = pd.read_csv(args.csv).sort_values("z")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(df["z"], df["margin"], yerr=df["error"], fmt="o-", capsize=3)
    ax.axhline(0.0, color="0.5", lw=0.8)
    ax.set_xlabel("Z")
    ax.set_ylabel("E0(1) - E0(2)")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
