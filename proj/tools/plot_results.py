#!/usr/bin/env python3
"""Render the capped-LMP day and the ESS operation panels from a `flexcap
run` output directory.

Usage: tools/plot_results.py <out_dir> [--cap 75] [--bus bus3]
"""
import argparse
import csv
import pathlib
import re

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_trajectory(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return rows


def series(rows, col):
    return [float(r[col]) for r in rows]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("--cap", type=float, default=75.0)
    ap.add_argument("--bus", default="bus3")
    args = ap.parse_args()

    baseline = read_trajectory(args.out_dir / "baseline.csv")
    runs = {}
    for p in sorted(args.out_dir.glob("trajectory_h*.csv")):
        h = int(re.search(r"trajectory_h(\d+)", p.name).group(1))
        runs[h] = read_trajectory(p)

    hours = series(baseline, "hour")
    lmp_col = f"lmp_{args.bus}"

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(hours, series(baseline, lmp_col), "b-", lw=2, label="no ESS")
    colors = {1: "g", 6: "k", 8: "m"}
    for h, rows in sorted(runs.items()):
        ax.plot(hours, series(rows, lmp_col), color=colors.get(h, None),
                lw=1.5, label=f"H={h}")
    ax.axhline(args.cap, color="r", ls="--", label="price cap")
    ax.set_xlabel("hour")
    ax.set_ylabel("LMP at %s (EUR/MWh)" % args.bus)
    ax.legend(loc="upper left", fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out_dir / "fig_lmp.png", dpi=150)

    fig, axes = plt.subplots(3, len(runs), figsize=(4 * len(runs), 8),
                             sharex=True, squeeze=False)
    for col, (h, rows) in enumerate(sorted(runs.items())):
        axes[0][col].bar(hours, series(rows, "flex"), color="tab:blue")
        axes[0][col].set_title(f"H={h}")
        axes[0][col].set_ylabel("flex (MW)" if col == 0 else "")
        axes[1][col].plot(hours, series(rows, "soc"), "tab:orange")
        axes[1][col].set_ylabel("SoC (MWh)" if col == 0 else "")
        axes[2][col].plot(hours, series(rows, "import_trans"), "tab:green")
        axes[2][col].set_ylabel("import (MW)" if col == 0 else "")
        axes[2][col].set_xlabel("hour")
        for r in range(3):
            axes[r][col].grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out_dir / "fig_operation.png", dpi=150)
    print(f"wrote {args.out_dir}/fig_lmp.png and fig_operation.png")


if __name__ == "__main__":
    main()
