#!/usr/bin/env python3
"""Compute pi (or 1/(2 pi)) to many digits with the quadratic scheme.

Prints per-step digit counts against the final value, then writes the
constant to a file.  The quintic scheme can be selected for comparison;
it reaches the same constant in fewer, more expensive steps.

Usage: python scripts/pi_digits.py [digits] [--scheme quadratic|quintic] [--constant pi|inv2pi]
"""

import argparse
import math
import time

from selfrep import agm


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("digits", type=int, nargs="?", default=1000)
    ap.add_argument("--scheme", choices=("quadratic", "quintic"), default="quadratic")
    ap.add_argument("--constant", choices=("pi", "inv2pi"), default="pi")
    ap.add_argument("--out", default="pi.txt")
    args = ap.parse_args()

    prec = int(args.digits * math.log2(10)) + 64
    init = agm.scheme_init("x125" if args.scheme == "quadratic" else "bauer", prec)
    rate = 2 if args.scheme == "quadratic" else 5
    iters = int(math.log(args.digits, rate)) + 4

    t0 = time.perf_counter()
    states = agm.run_scheme(init, iters, prec)
    elapsed = time.perf_counter() - t0
    final = states[-1].a
    for st in states[:-1]:
        print(f"step {st.k:2d}: {agm.digits_correct(st.a, final):6d} digits")
    print(f"step {states[-1].k:2d}: saturated at working precision")

    value = final if args.constant == "inv2pi" else 1 / (2 * final)
    text = value.to_decimal(args.digits)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    print(f"{args.constant} to {args.digits} digits in {elapsed:.3f}s -> {args.out}")
    print(text[:80] + ("..." if len(text) > 80 else ""))


if __name__ == "__main__":
    main()
