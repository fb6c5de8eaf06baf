"""Command-line entry point: one subcommand per workbench area.

Exit codes: 0 success; 1 a verification-style result came back negative
(still a valid answer); 2 usage or domain error; 3 internal error.
Big integers serialize as decimal strings in JSON output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import agm, congruences, equations, holonomic, legendre, qseries, search, sequences
from .powerseries import NonzeroInnerConstant, PoleAtOrigin, ZeroConstantTerm

_DOMAIN_ERRORS = (
    sequences.UnknownFamily,
    equations.InvalidEquation,
    qseries.UnsupportedLevel,
    agm.DivergentTarget,
    holonomic.InsufficientTerms,
    ZeroConstantTerm,
    NonzeroInnerConstant,
    PoleAtOrigin,
    KeyError,
    ValueError,
    FileNotFoundError,
    json.JSONDecodeError,
)


def _out_path(name: str | None):
    if name is None:
        return None
    base = os.environ.get("SELFREP_OUTPUT_DIR")
    if base and not os.path.isabs(name):
        return os.path.join(base, name)
    return name


def _emit(data, out: str | None):
    text = json.dumps(data, indent=2)
    path = _out_path(out)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _family_tag(args) -> str:
    if args.family:
        return args.family
    if args.c:
        return f"c:{args.c}"
    if args.cvar:
        return f"cvar:{args.cvar}"
    raise ValueError("one of --family / --c / --cvar is required")


def cmd_gen(args) -> int:
    tag = _family_tag(args)
    terms = sequences.family_terms(tag, args.terms)
    text = sequences.format_terms(terms, args.format)
    path = _out_path(args.out)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def _parse_rational(text: str) -> Fraction:
    return Fraction(text)


def cmd_verify_feq(args) -> int:
    if args.file:
        eq = equations.load_equation(args.file)
        eq_id = args.file
    else:
        eq = equations.get_equation(args.id)
        eq_id = args.id
    f = equations.solve(eq, args.order)
    if args.weights:
        a_s, b_s = args.weights.split(",")
        verified = equations.differentiated_identity(
            eq, f, _parse_rational(a_s), _parse_rational(b_s), args.order
        )
        kind = f"weighted({args.weights})"
    else:
        verified = equations.verify(eq, f, args.order)
        kind = "plain"
    record = {
        "id": eq_id,
        "kind": kind,
        "order": args.order,
        "verified": verified,
        "pass": verified == args.order,
    }
    _emit(record, args.out)
    return 0 if record["pass"] else 1


def cmd_congruence(args) -> int:
    tag = _family_tag(args)
    terms = sequences.family_terms(tag, args.terms)
    if args.ell is not None:
        primes = congruences.primes_upto(
            args.primes, congruences.SUPER_MIN_PRIME if args.ell >= 2 else 2
        )
        failures = {}
        for p in primes:
            cx = congruences.super_check(terms, p, args.ell, args.rmax, args.terms)
            if cx is not None:
                failures[p] = cx.to_json()
        record = {
            "family": tag,
            "ell": args.ell,
            "primes": primes,
            "n_max": args.terms,
            "r_max": args.rmax,
            "pass": not failures,
            "failures": {str(p): f for p, f in failures.items()},
        }
        _emit(record, args.out)
        return 0 if not failures else 1
    report = congruences.run_report(
        tag, terms, prime_bound=args.primes, n_max=args.terms, r_max=args.rmax
    )
    if args.format == "csv":
        text = report.to_csv()
        path = _out_path(args.out)
        if path:
            open(path, "w", encoding="utf-8").write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(report.to_json(), args.out)
    return 0


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return (int(lo), int(hi))


def cmd_search(args) -> int:
    if args.config:
        spec = search.load_spec(args.config)
    else:
        lam = _parse_range(args.lambda_range) if args.lambda_range else (-args.range, args.range)
        mu = _parse_range(args.mu_range) if args.mu_range else None
        if mu is None and args.constraint is None:
            mu = lam
        spec = search.SweepSpec(
            shape=args.shape,
            lambda_range=lam,
            mu_range=mu,
            constraint=args.constraint,
            ell=args.ell,
            lucas=args.lucas,
            terms=args.terms,
            prime_bound=args.primes,
            probe_terms=args.probe_terms,
        )
    results = search.sweep(
        spec, jobs=args.jobs, out_path=_out_path(args.out), resume=args.resume
    )
    if not args.out:
        for rec in results:
            print(json.dumps(rec))
    passing = search.passing_pairs(results)
    print(
        json.dumps({"pairs_tested": len(results), "passing": [list(p) for p in passing]}),
        file=sys.stderr,
    )
    return 0


def cmd_guess(args) -> int:
    if args.file:
        terms = holonomic.read_terms_file(args.file)
    else:
        tag = _family_tag(args)
        terms = sequences.family_terms(tag, args.terms)
    report = holonomic.guess_report(terms, args.rmax, args.dmax)
    _emit(report, args.out)
    return 0 if report["found"] else 1


def cmd_modular(args) -> int:
    if args.export:
        qs = (qseries.z_level if args.export == "z" else qseries.p_level)(
            args.level, args.order
        )
        _emit(qs.to_json(), args.out)
        return 0
    verified = qseries.parametrization_check(args.level, args.order)
    record = {
        "level": args.level,
        "family": qseries.level_family(args.level),
        "order": args.order,
        "verified": verified,
        "pass": verified == args.order,
    }
    _emit(record, args.out)
    return 0 if record["pass"] else 1


def cmd_legendre(args) -> int:
    record = {"degree": args.degree}
    ok = True
    if args.check in ("bb", "both"):
        got = legendre.bailey_brafman_check(args.degree)
        record["product_identity"] = got
        ok &= got == args.degree
    if args.check in ("leg", "both"):
        got = legendre.leg_identity_check(args.degree)
        record["selfrep_identity"] = got
        ok &= got == args.degree
    record["pass"] = ok
    _emit(record, args.out)
    return 0 if ok else 1


def cmd_agm(args) -> int:
    prec = int(args.digits * math.log2(10)) + 64
    init = agm.scheme_init(args.init, prec)
    if args.scheme and args.scheme != init.scheme:
        raise ValueError(f"init {args.init!r} belongs to the {init.scheme} scheme")
    if args.iters:
        iters = args.iters
    else:
        rate = 2 if init.scheme == "quadratic" else 5
        iters = max(3, int(math.log(args.digits, rate)) + 3)
    t0 = time.perf_counter()
    states = agm.run_scheme(init, iters, prec)
    final = states[-1].a
    for st in states:
        rec = {
            "k": st.k,
            "digits_correct": agm.digits_correct(st.a, final) if st.k < states[-1].k else None,
            "a": st.a.to_decimal(32),
            "saturated": st.saturated,
            "elapsed_s": round(time.perf_counter() - t0, 6),
        }
        print(json.dumps(rec))
    summary = {
        "scheme": init.scheme,
        "init": args.init,
        "limit": init.limit_tag,
        "digits": args.digits,
        "steps": len(states) - 1,
        "value": final.to_decimal(args.digits),
        "notes": init.notes,
    }
    print(json.dumps(summary))
    path = _out_path(args.out)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(final.to_decimal(args.digits) + "\n")
    return 0


def cmd_series(args) -> int:
    prec = int(args.digits * math.log2(10)) + 64
    target = agm.series_target(args.target, prec)
    result = agm.eval_series(target, args.digits)
    record = {
        "target": args.target,
        "family": target.family,
        "limit": target.limit_tag,
        "digits": args.digits,
        "terms_used": result.terms_used,
        "tail_bound": result.tail_bound.to_decimal(4),
        "value": result.value.to_decimal(args.digits),
    }
    _emit(record, args.out)
    return 0


PAPER_MAP = (
    ("f7", "level-7 weight-2 identity", "selfrep verify-feq --id f7 --order 50"),
    ("alg0", "cubic two-parameter shape", "selfrep verify-feq --id alg0:-4,2 --order 50"),
    ("variant", "quadratic two-parameter shape", "selfrep verify-feq --id variant:2,0 --order 50"),
    ("f2", "level-2 squared series", "selfrep verify-feq --id f2 --order 50"),
    ("f3", "level-3 squared series", "selfrep verify-feq --id f3 --order 50"),
    ("f4", "level-4 squared series", "selfrep verify-feq --id f4 --order 50"),
    ("f5", "level-5 series", "selfrep verify-feq --id f5 --order 50"),
    ("fhat2", "cubic replication, quartic denominators", "selfrep verify-feq --id fhat2 --order 50"),
    ("fhat4c", "central-binomial-cube, cubic replication", "selfrep verify-feq --id fhat4c --order 50"),
    ("fhat4q", "central-binomial-cube, quintic replication", "selfrep verify-feq --id fhat4q --order 50"),
    ("fhat5", "alternating binomial-cube series", "selfrep verify-feq --id fhat5 --order 50"),
    ("gb", "squared-binomial times central", "selfrep verify-feq --id gb --order 50"),
    ("gc", "binomial-cube row sums", "selfrep verify-feq --id gc --order 50"),
    ("g5", "quintic row-sum series", "selfrep verify-feq --id g5 --order 50"),
    ("z/p levels", "hidden parametrizations, levels 2,3,4,5,7", "selfrep modular --level 7 --order 40"),
    ("x125", "1/(8pi) series and quadratic scheme", "selfrep series --target x125 --digits 120; selfrep agm --init x125 --digits 1000"),
    ("n21a", "Gamma-value series, b0 = 0", "selfrep agm --init n21a --digits 200"),
    ("n21", "normalized 1/(2pi) companion", "selfrep agm --init n21 --digits 200"),
    ("bauer", "quintic scheme, alternating data", "selfrep agm --scheme quintic --init bauer --digits 200"),
    ("n3/n7", "quintic scheme, positive data", "selfrep agm --init n3 --digits 200"),
    ("legendre", "two-variable product + replication", "selfrep legendre --degree 16"),
)


def cmd_paper_map(args) -> int:
    width = max(len(row[0]) for row in PAPER_MAP)
    for name, desc, cmd in PAPER_MAP:
        print(f"{name:<{width}}  {desc:<44}  {cmd}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfrep",
        description="Workbench for self-replicating functional equations and their applications.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_family_flags(p):
        p.add_argument("--family", help="named family id (u7, f2, ..., g5) or c:/cvar: tag")
        p.add_argument("--c", metavar="L,M", help="cubic-shape pair, e.g. -4,2")
        p.add_argument("--cvar", metavar="L,M", help="variant-shape pair, e.g. 0,4")

    p = sub.add_parser("gen", help="generate exact sequence terms")
    add_family_flags(p)
    p.add_argument("--terms", type=int, required=True, help="highest index N (terms 0..N)")
    p.add_argument("--format", choices=("lines", "json"), default="lines")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("verify-feq", help="solve and verify a functional equation")
    p.add_argument("--id", help="registry id (see paper-map) or alg0:L,M / variant:L,M")
    p.add_argument("--file", help="equation description JSON file")
    p.add_argument("--order", type=int, default=50)
    p.add_argument("--weights", metavar="A,B", help="verify the (A+Bn)-weighted identity")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify_feq)

    p = sub.add_parser("congruence", help="Lucas / prime-power congruence scans")
    add_family_flags(p)
    p.add_argument("--ell", type=int, help="test one level over the grid (exit 1 on failure)")
    p.add_argument("--primes", type=int, default=20, help="prime bound")
    p.add_argument("--terms", type=int, default=congruences.DEFAULT_INDEX_BOUND)
    p.add_argument("--rmax", type=int, default=congruences.DEFAULT_R_MAX)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_congruence)

    p = sub.add_parser("search", help="parameter sweeps with congruence filters")
    p.add_argument("--shape", choices=("alg0", "variant"), default="alg0")
    p.add_argument("--range", type=int, default=10, help="|lambda|,|mu| bound")
    p.add_argument("--lambda", dest="lambda_range", metavar="LO:HI")
    p.add_argument("--mu", dest="mu_range", metavar="LO:HI")
    p.add_argument(
        "--constraint", choices=("lambda2-eq-mu", "lambda-eq-minus-2mu"), default=None
    )
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--lucas", action="store_true", help="also record Lucas verdicts")
    p.add_argument("--terms", type=int, default=400)
    p.add_argument("--primes", type=int, default=50)
    p.add_argument("--probe-terms", type=int, default=100)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", help="JSON-lines output path")
    p.add_argument("--resume", action="store_true", help="skip pairs already in --out")
    p.add_argument("--config", help="SweepSpec JSON/TOML file (overrides flags)")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("guess", help="guess a polynomial-coefficient recurrence")
    add_family_flags(p)
    p.add_argument("--file", help="terms file, one decimal integer per line")
    p.add_argument("--terms", type=int, default=60, help="prefix length when using --family")
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_guess)

    p = sub.add_parser("modular", help="q-expansions and parametrization checks")
    p.add_argument("--level", type=int, required=True, choices=qseries.LEVELS)
    p.add_argument("--order", type=int, default=40)
    p.add_argument("--export", choices=("z", "p"), help="emit the expansion instead")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_modular)

    p = sub.add_parser("legendre", help="two-variable identity checks")
    p.add_argument("--degree", type=int, default=16)
    p.add_argument("--check", choices=("bb", "leg", "both"), default="both")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_legendre)

    p = sub.add_parser("agm", help="run an iteration scheme")
    p.add_argument("--scheme", choices=("quadratic", "quintic"))
    p.add_argument("--init", required=True, help=f"one of {', '.join(agm.INIT_NAMES)}")
    p.add_argument("--digits", type=int, default=100)
    p.add_argument("--iters", type=int, help="override the step count")
    p.add_argument("--out", help="write the final constant as a decimal string file")
    p.set_defaults(fn=cmd_agm)

    p = sub.add_parser("series", help="evaluate a weighted series target")
    p.add_argument("--target", required=True, help=f"one of {', '.join(agm.SERIES_TARGET_NAMES)}")
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_series)

    p = sub.add_parser("paper-map", help="print the identity-to-command reference table")
    p.set_defaults(fn=cmd_paper_map)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _DOMAIN_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except Exception as exc:  # internal error
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
