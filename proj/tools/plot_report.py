#!/usr/bin/env python3
"""Summarize (and optionally plot) a fracrom output directory.

Usage:
    tools/plot_report.py out/gp-desk            # terminal summary
    tools/plot_report.py out/gp-desk --png x.png  # + sigma decay / error plot

Reads whatever exists of singular_values.csv, errors.csv, train_report.json.
"""

import argparse
import collections
import csv
import json
import math
import pathlib
import sys


def read_sigmas(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return [float(r["sigma_estimate"]) for r in rows]


def read_errors(path):
    per_alpha = collections.defaultdict(list)
    with open(path, newline="") as f:
        for row in csv.reader(f):
            if not row or row[0] in ("problem", "summary"):
                continue
            per_alpha[float(row[1])].append(float(row[-3]))
    return dict(sorted(per_alpha.items()))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir", type=pathlib.Path)
    ap.add_argument("--png", type=pathlib.Path, help="write a figure here")
    args = ap.parse_args()

    sig_path = args.outdir / "singular_values.csv"
    err_path = args.outdir / "errors.csv"
    rep_path = args.outdir / "train_report.json"

    sigmas = read_sigmas(sig_path) if sig_path.exists() else []
    errors = read_errors(err_path) if err_path.exists() else {}
    report = json.loads(rep_path.read_text()) if rep_path.exists() else {}

    if report:
        n_bad = sum(1 for s in report.get("samples", []) if not s.get("converged", True))
        print(f"{report.get('problem', '?')}: n_dof={report.get('n_dof')} "
              f"K={report.get('K')} n_train={len(report.get('samples', []))} "
              f"n_shifts={report.get('n_shifts')} "
              f"unconverged_samples={n_bad}")
    if sigmas:
        k = report.get("K")
        decades = math.log10(sigmas[0] / sigmas[min(len(sigmas), k or len(sigmas)) - 1])
        print(f"sigma estimates: {len(sigmas)} values, sigma_0={sigmas[0]:.3e}, "
              f"decay over the kept range: {decades:.1f} decades")
        if decades < 3:
            print("  warning: < 3 decades of decay before K - consider a larger K")
    for alpha, errs in errors.items():
        print(f"alpha={alpha:.2f}: max rel L2 err {max(errs):.3e} "
              f"(mean {sum(errs) / len(errs):.3e}, {len(errs)} queries)")

    if not args.png:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2 if errors else 1, figsize=(10, 4))
    axes = axes if isinstance(axes, (list, tuple)) or hasattr(axes, "__len__") else [axes]
    if sigmas:
        ax = axes[0]
        ax.semilogy(range(len(sigmas)), sigmas, ".-")
        if report.get("K"):
            ax.axvline(report["K"], color="k", ls="--", lw=0.8, label=f"K={report['K']}")
            ax.legend()
        ax.set_xlabel("index")
        ax.set_ylabel("sketch sigma estimate")
        ax.set_title("basis spectrum")
    if errors:
        ax = axes[-1]
        alphas = list(errors)
        ax.semilogy(alphas, [max(v) for v in errors.values()], "o-", label="max")
        ax.semilogy(alphas, [sum(v) / len(v) for v in errors.values()], ".--", label="mean")
        ax.set_xlabel("alpha")
        ax.set_ylabel("rel L2 error vs full order")
        ax.set_title("sweep errors")
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.png, dpi=120)
    print(f"wrote {args.png}")


if __name__ == "__main__":
    sys.exit(main())
