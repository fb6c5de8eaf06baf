#!/usr/bin/env python3
"""Verify every registered identity end to end and print a status table.

Covers: all registry functional equations (solve then verify, plus the
weighted companion identity), the five hidden parametrizations as formal
q-series, and the two-variable Legendre identities.

Usage: python scripts/verify_identities.py [--order 50] [--qorder 40] [--degree 16]
"""

import argparse
import time

from selfrep import equations, legendre, qseries


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--order", type=int, default=50)
    ap.add_argument("--qorder", type=int, default=40)
    ap.add_argument("--degree", type=int, default=16)
    args = ap.parse_args()

    t0 = time.perf_counter()
    failures = 0
    for eq_id in equations.registry_ids():
        eq = equations.get_equation(eq_id)
        f = equations.solve(eq, args.order)
        plain = equations.verify(eq, f, args.order)
        weighted = equations.differentiated_identity(eq, f, 1, 1, args.order)
        ok = plain == args.order and weighted == args.order
        failures += not ok
        print(f"equation {eq_id:8s} m={eq.order}  plain={plain}  weighted={weighted}  "
              f"{'ok' if ok else 'FAIL'}")

    for level in qseries.LEVELS:
        got = qseries.parametrization_check(level, args.qorder)
        ok = got == args.qorder
        failures += not ok
        print(f"parametrization level {level}: {got}/{args.qorder}  {'ok' if ok else 'FAIL'}")

    bb = legendre.bailey_brafman_check(args.degree)
    lg = legendre.leg_identity_check(args.degree)
    failures += (bb != args.degree) + (lg != args.degree)
    print(f"legendre product identity: {bb}/{args.degree}")
    print(f"legendre replication identity: {lg}/{args.degree}")
    print(f"total failures: {failures}  ({time.perf_counter() - t0:.1f}s)")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
