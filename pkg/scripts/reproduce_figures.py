#!/usr/bin/env python3
"""Write the data behind figures 1-3 as CSV files, plus PNGs if matplotlib is present."""

import argparse
from pathlib import Path

import numpy as np

from confbias.cli import figure1_csv, figure2_csv, figure3_csv


def load(text):
    return np.genfromtxt(text.splitlines(), delimiter=",", names=True)


def plot(outdir, data):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return False
    f1, f2, f3 = data
    fig, axes = plt.subplots(1, 3, figsize=(14, 4))
    ax = axes[0]
    ax.plot(f1["step"], f1["post_mean"], lw=1)
    ax.fill_between(f1["step"], f1["post_mean"] - 2 * f1["post_sd"],
                    f1["post_mean"] + 2 * f1["post_sd"], alpha=0.3)
    ax.axhline(140, ls="--", c="k", lw=0.8)
    ax.axhline(138, ls=":", c="r", lw=0.8)
    ax.set(xscale="log", xlabel="observations", ylabel="posterior mean")
    ax = axes[1]
    ax.plot(f2["x"], f2["influence_exponential"], label="exponential")
    ax.plot(f2["x"], f2["influence_loggamma"], label="log-gamma")
    ax.set(xlabel="x", ylabel="n * change in estimate")
    ax.legend()
    ax = axes[2]
    ax.plot(f3["beta"], f3["subjective_var_coeff"], label="subjective")
    ax.plot(f3["beta"], f3["true_var_coeff"], label="true")
    ax.set(xscale="log", yscale="log", xlabel="beta", ylabel="n var / sigma^2")
    ax.legend()
    fig.tight_layout()
    fig.savefig(outdir / "figures.png", dpi=120)
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("figures"))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    texts = [figure1_csv(args.seed), figure2_csv(), figure3_csv()]
    for k, text in enumerate(texts, start=1):
        (args.outdir / f"figure{k}.csv").write_text(text)
    drew = plot(args.outdir, [load(t) for t in texts])
    print(f"wrote {args.outdir}/figure{{1,2,3}}.csv" + (" and figures.png" if drew else ""))


if __name__ == "__main__":
    main()
