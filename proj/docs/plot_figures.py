#!/usr/bin/env python3
"""Plot the data files emitted by `deepprior figure`.

Usage: plot_figures.py [data_dir] [out_dir]

Groups fig*.csv files by prefix and writes one PNG per figure. Only
matplotlib is required; the CSV layout is a comment header (# key=value)
followed by a column-name row.
"""

import collections
import csv
import glob
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_table(path):
    meta, cols, rows = {}, [], []
    with open(path, newline="") as f:
        for rec in csv.reader(f):
            if not rec:
                continue
            if rec[0].startswith("#"):
                text = rec[0].lstrip("# ")
                if "=" in text:
                    k, v = text.split("=", 1)
                    meta[k] = v
                continue
            if not cols:
                cols = rec
                continue
            rows.append(rec)
    data = {c: [] for c in cols}
    for rec in rows:
        for c, cell in zip(cols, rec):
            try:
                data[c].append(float(cell))
            except ValueError:
                data[c].append(float("nan"))
    return meta, data


def main():
    data_dir = sys.argv[1] if len(sys.argv) > 1 else "."
    out_dir = sys.argv[2] if len(sys.argv) > 2 else data_dir
    groups = collections.defaultdict(list)
    for path in sorted(glob.glob(os.path.join(data_dir, "fig*.csv"))):
        prefix = os.path.basename(path).split("_")[0]
        groups[prefix].append(path)
    if not groups:
        sys.exit(f"no fig*.csv files in {data_dir}")

    for prefix, paths in sorted(groups.items()):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for path in paths:
            meta, data = read_table(path)
            label = os.path.basename(path)[len(prefix) + 1 : -4]
            r = data["radius"]
            ax.plot(r, data["exact_density"], label=label)
            if path == paths[0]:
                ax.plot(r, data["gaussian_limit"], "k--", lw=1,
                        label="gaussian limit")
            if "edgeworth" in data:
                ax.plot(r, data["edgeworth"], ":", label=label + " edgeworth")
        ax.set_xlabel("radius")
        ax.set_ylabel("density")
        ax.set_yscale("log")
        ax.legend(fontsize=8)
        fig.tight_layout()
        out = os.path.join(out_dir, prefix + ".png")
        fig.savefig(out, dpi=150)
        plt.close(fig)
        print("wrote", out)


if __name__ == "__main__":
    main()
