#!/usr/bin/env python3
"""Plot a loss-CDF curve exported by gfmrisk, optionally overlaying an
empirical Monte Carlo curve for comparison.

Typical workflow:

    gfmrisk cdf --example --grid 0:0.30:200 --out curve.csv
    gfmrisk mc-check --example --samples 1000000 --curve-out mc.csv
    python3 docs/examples/plot_cdf.py curve.csv --mc mc.csv --out figure1.png

Requires matplotlib; the CLI itself has no plotting dependency.
"""

import argparse
import csv
import sys


def read_curve(path):
    """Read a two-column CSV (header row, then x,value) into two lists."""
    xs, ys = [], []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if len(header) != 2:
            sys.exit(f"{path}: expected two columns, got {header!r}")
        for row in reader:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
    return xs, ys


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("curve", help="quadrature CDF CSV from `gfmrisk cdf --grid ... --out`")
    ap.add_argument("--mc", help="empirical CDF CSV from `gfmrisk mc-check --curve-out`")
    ap.add_argument("--var", type=float, help="mark a VaR level (loss fraction) with a vertical line")
    ap.add_argument("--out", help="write the figure to this file instead of showing it")
    args = ap.parse_args()

    import matplotlib

    if args.out:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))

    xs, ys = read_curve(args.curve)
    ax.plot(xs, ys, label="quadrature CDF", lw=1.5)

    if args.mc:
        mx, my = read_curve(args.mc)
        # The empirical file has one row per sample; a step plot of every
        # point is exact and matplotlib copes fine with ~1e6 rows.
        ax.step(mx, my, where="post", label="Monte Carlo CDF", lw=1.0, alpha=0.8)

    if args.var is not None:
        ax.axvline(args.var, color="gray", ls="--", lw=1.0,
                   label=f"VaR = {100.0 * args.var:.2f}%")

    ax.set_xlabel("loss (fraction of total notional)")
    ax.set_ylabel("P(L ≤ x)")
    ax.set_ylim(0.0, 1.02)
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()

    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
