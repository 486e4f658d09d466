#!/usr/bin/env python3
"""Plot a bifurcation diagram from `rotabouss reduce --r-scan` output.

Reads the reduction CSV (columns R, beta, delta, radius_pred) and draws the
predicted branch radius against the Rayleigh number: the flat trivial branch
below onset and the square-root branch above it.  Optionally overlays
saturated amplitudes measured from simulation CSVs passed as extra
arguments (each contributes one point at its Rayleigh number, read from the
matching manifest).  Requires matplotlib.

Usage: plot_bifurcation.py reduce.csv [out.png] [sim1.csv sim2.csv ...]
"""
import csv
import json
import os
import sys


def _sim_point(path: str):
    manifest = os.path.splitext(path)[0] + ".manifest.json"
    with open(manifest, "r", encoding="utf-8") as fh:
        r_value = json.load(fh)["params"]["rayleigh"]
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    last = rows[-1]
    amp = (float(last["re_wmode"]) ** 2 + float(last["im_wmode"]) ** 2) ** 0.5
    return float(r_value), amp


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is required for plotting (pip install matplotlib)",
              file=sys.stderr)
        return 1
    with open(sys.argv[1], newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    r = [float(row["R"]) for row in rows]
    rad = [float(row["radius_pred"]) for row in rows]
    out = "bifurcation.png"
    sims = []
    rest = sys.argv[2:]
    if rest and rest[0].lower().endswith((".png", ".pdf", ".svg")):
        out, rest = rest[0], rest[1:]
    sims = rest
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(r, rad, "-", lw=1.4, label="predicted branch radius")
    ax.plot(r, [0.0] * len(r), "k--", lw=0.8, label="trivial branch")
    for path in sims:
        rv, amp = _sim_point(path)
        ax.plot([rv], [amp], "s", ms=6, label=f"simulation (R={rv:.1f})")
    ax.set_xlabel("Rayleigh number R")
    ax.set_ylabel("steady amplitude")
    ax.set_title("bifurcation diagram at the steady onset")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
