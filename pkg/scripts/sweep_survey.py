#!/usr/bin/env python3
"""Reproduce the congruence surveys over both equation shapes.

Runs the level-1 sweep along lambda^2 = mu, the unconstrained level-1
sweep on a small box, and the level-3 variant sweep, writing JSON-lines
files plus a summary.  Ranges are configurable; the defaults finish in
about a minute.  For large offline surveys raise --range and use
--resume to continue interrupted runs.

Usage: python scripts/sweep_survey.py [--range 8] [--outdir sweeps/]
"""

import argparse
import json
import os
import time

from selfrep import search


def run(tag, spec, outdir, jobs, resume):
    path = os.path.join(outdir, f"{tag}.jsonl")
    t0 = time.perf_counter()
    results = search.sweep(spec, jobs=jobs, out_path=path, resume=resume)
    passing = search.passing_pairs(results)
    print(
        f"{tag}: {len(results)} pairs, {len(passing)} passing "
        f"({time.perf_counter() - t0:.1f}s) -> {path}"
    )
    print("  passing:", passing)
    return passing


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--range", type=int, default=8)
    ap.add_argument("--sq-range", type=int, default=20, help="|lambda| bound for lambda^2 = mu")
    ap.add_argument("--outdir", default="sweeps")
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--resume", action="store_true")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    summary = {}
    summary["square_l1"] = run(
        "alg0-square-ell1",
        search.SweepSpec(
            shape="alg0",
            lambda_range=(-args.sq_range, args.sq_range),
            constraint="lambda2-eq-mu",
            ell=1,
            terms=400,
            prime_bound=50,
        ),
        args.outdir,
        args.jobs,
        args.resume,
    )
    summary["box_l1"] = run(
        "alg0-box-ell1",
        search.SweepSpec(
            shape="alg0",
            lambda_range=(-args.range, args.range),
            mu_range=(-args.range, args.range),
            ell=1,
            lucas=True,
            terms=400,
            prime_bound=50,
        ),
        args.outdir,
        args.jobs,
        args.resume,
    )
    summary["variant_l3"] = run(
        "variant-box-ell3",
        search.SweepSpec(
            shape="variant",
            lambda_range=(-args.range, args.range),
            mu_range=(-args.range, args.range),
            ell=3,
            terms=400,
            prime_bound=50,
        ),
        args.outdir,
        args.jobs,
        args.resume,
    )
    with open(os.path.join(args.outdir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump({k: [list(p) for p in v] for k, v in summary.items()}, fh, indent=2)


if __name__ == "__main__":
    main()
