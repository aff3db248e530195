#!/usr/bin/env python3
"""Plot the yield/fidelity comparison curves emitted by `ghz-purify curves`.

Usage:
    ghz-purify curves --sweep 0.25:1:76 --out curves.csv
    python3 docs/plot_curves.py curves.csv curves.png
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    rows = list(csv.DictReader(open(sys.argv[1])))
    f0 = [float(r["F0"]) for r in rows]

    fig, (ax_y, ax_f) = plt.subplots(1, 2, figsize=(10, 4))
    for key, style in [("Y_e", "-"), ("Y_c", "--"), ("Y_2to3", ":")]:
        ax_y.plot(f0, [float(r[key]) for r in rows], style, label=key)
    ax_y.set_xlabel("F0")
    ax_y.set_ylabel("efficiency")
    ax_y.legend()

    for key, style in [("F_e", "-"), ("F_c", "--"), ("F_2", "-."), ("F_2to3", ":")]:
        ax_f.plot(f0, [float(r[key]) for r in rows], style, label=key)
    ax_f.plot(f0, f0, linewidth=0.5, color="gray", label="F0")
    ax_f.set_xlabel("F0")
    ax_f.set_ylabel("fidelity")
    ax_f.legend()

    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()
