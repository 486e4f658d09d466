#!/usr/bin/env python3
"""Plot a neutral-stability scan produced by `rotabouss critical --scan`.

Reads the scan CSV (columns R, re_beta_max, im_beta_at_max, j, k, l) and
draws the leading growth rate against the Rayleigh number, marking the zero
crossing.  Requires matplotlib, which the core package deliberately does not
depend on.

Usage: plot_neutral_curve.py scan.csv [out.png]
"""
import csv
import sys


def main() -> int:
    if len(sys.argv) not in (2, 3):
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
    g = [float(row["re_beta_max"]) for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(r, g, "o-", lw=1.2)
    ax.axhline(0.0, color="k", lw=0.8)
    for r0, r1, g0, g1 in zip(r, r[1:], g, g[1:]):
        if g0 <= 0.0 < g1 or g0 < 0.0 <= g1:
            rc = r0 - g0 * (r1 - r0) / (g1 - g0)
            ax.axvline(rc, color="crimson", ls="--", lw=0.8)
            ax.annotate(f"onset ~ {rc:.1f}", (rc, 0.0),
                        textcoords="offset points", xytext=(6, 8))
            break
    ax.set_xlabel("Rayleigh number R")
    ax.set_ylabel("leading growth rate Re(beta)")
    ax.set_title("neutral-stability scan")
    fig.tight_layout()
    out = sys.argv[2] if len(sys.argv) == 3 else "neutral_curve.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
