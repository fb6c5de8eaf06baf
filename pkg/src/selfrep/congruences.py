"""Lucas-congruence and prime-power congruence testing over explicit grids.

A "pass" is always grid-relative: the tested primes, index bound and
prime-power depth are part of every report, mirroring the empirical
status of these congruences for several families.  Counterexamples are
re-verified against the raw integer terms before being reported.

The level-3 tests (c(m p^r) = c(m p^(r-1)) mod p^(3r)) are
Wolstenholme-type statements that are false at p = 2, 3 even for the
central binomial coefficients, so the default grid for levels >= 2
starts at p = 5; Lucas and level-1 grids start at p = 2.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

DEFAULT_PRIME_BOUND = 50
DEFAULT_INDEX_BOUND = 2000
DEFAULT_R_MAX = 4
SUPER_MIN_PRIME = 5


def primes_upto(bound: int, minimum: int = 2) -> list[int]:
    sieve = bytearray([1]) * (bound + 1) if bound >= 0 else bytearray()
    out = []
    for p in range(2, bound + 1):
        if sieve[p]:
            if p >= minimum:
                out.append(p)
            for q in range(p * p, bound + 1, p):
                sieve[q] = 0
    return out


def base_p_digits(n: int, p: int) -> list[int]:
    """Little-endian base-p digits; [0] for n = 0."""
    if n < 0 or p < 2:
        raise ValueError("need n >= 0 and p >= 2")
    if n == 0:
        return [0]
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return digits


@dataclass(frozen=True)
class Counterexample:
    """A re-verified failure of a congruence at one grid point."""

    n: int
    lhs: int
    rhs: int
    modulus: int
    r: int | None = None
    m: int | None = None

    def to_json(self) -> dict:
        data = {"n": self.n, "lhs": str(self.lhs), "rhs": str(self.rhs), "modulus": str(self.modulus)}
        if self.r is not None:
            data["r"] = self.r
            data["m"] = self.m
        return data


def lucas_check(terms: list[int], p: int, n_max: int) -> Counterexample | None:
    """Check c(n) = prod c(n_i) mod p over base-p digits for all n <= n_max.

    Returns None on a full pass, else the first counterexample.
    """
    if len(terms) <= n_max:
        raise ValueError(f"need {n_max + 1} terms, got {len(terms)}")
    res = [t % p for t in terms[: n_max + 1]]
    for n in range(n_max + 1):
        prod = 1
        for d in base_p_digits(n, p):
            prod = prod * res[d] % p
        if res[n] != prod:
            digits = base_p_digits(n, p)
            rhs = 1
            for d in digits:
                rhs *= terms[d]
            assert (terms[n] - rhs) % p != 0  # re-verify on raw terms
            return Counterexample(n=n, lhs=res[n], rhs=rhs % p, modulus=p)
    return None


def super_check(
    terms: list[int], p: int, ell: int, r_max: int, n_max: int
) -> Counterexample | None:
    """Check c(m p^r) = c(m p^(r-1)) mod p^(ell r) over the whole grid.

    Grid: 1 <= r <= r_max and every m with m p^r <= n_max.  ell = 0
    passes trivially.  Returns None on pass, else the first failure.
    """
    if len(terms) <= n_max:
        raise ValueError(f"need {n_max + 1} terms, got {len(terms)}")
    if ell == 0:
        return None
    for r in range(1, r_max + 1):
        pr = p**r
        if pr > n_max:
            break
        modulus = p ** (ell * r)
        prev = pr // p
        for m in range(1, n_max // pr + 1):
            lhs, rhs = terms[m * pr], terms[m * prev]
            if (lhs - rhs) % modulus:
                assert (lhs - rhs) % modulus != 0
                return Counterexample(
                    n=m * pr, lhs=lhs % modulus, rhs=rhs % modulus, modulus=modulus, r=r, m=m
                )
    return None


def max_ell(
    terms: list[int], primes: list[int], n_max: int, r_max: int = DEFAULT_R_MAX
) -> dict[int, int]:
    """Largest level in {0..3} passing the prime-power grid, per prime."""
    out = {}
    for p in primes:
        level = 0
        for ell in (3, 2, 1):
            if super_check(terms, p, ell, r_max, n_max) is None:
                level = ell
                break
        out[p] = level
    return out


@dataclass
class CongruenceReport:
    """Verdicts of the Lucas and prime-power tests for one family."""

    family: str
    n_max: int
    r_max: int
    lucas_primes: list[int]
    super_primes: list[int]
    lucas: dict[int, Counterexample | None] = field(default_factory=dict)
    ell: dict[int, int] = field(default_factory=dict)

    @property
    def grid(self) -> str:
        return (
            f"lucas p in {self.lucas_primes}, levels p in {self.super_primes}, "
            f"n <= {self.n_max}, r <= {self.r_max}"
        )

    def all_lucas_pass(self) -> bool:
        return all(v is None for v in self.lucas.values())

    def min_ell(self) -> int:
        return min(self.ell.values()) if self.ell else 0

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n_max": self.n_max,
            "r_max": self.r_max,
            "grid": self.grid,
            "lucas": {
                str(p): ("pass" if v is None else v.to_json()) for p, v in self.lucas.items()
            },
            "max_ell": {str(p): e for p, e in self.ell.items()},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["family", "p", "lucas", "max_ell", "N"])
        for p in sorted(set(self.lucas_primes) | set(self.super_primes)):
            if p in self.lucas:
                cx = self.lucas[p]
                lucas_s = "pass" if cx is None else f"fail@{cx.n}"
            else:
                lucas_s = ""
            ell = self.ell.get(p, "")
            writer.writerow([self.family, p, lucas_s, ell, self.n_max])
        return buf.getvalue()


def run_report(
    family: str,
    terms: list[int],
    prime_bound: int = 20,
    n_max: int = DEFAULT_INDEX_BOUND,
    r_max: int = DEFAULT_R_MAX,
    super_min_prime: int = SUPER_MIN_PRIME,
) -> CongruenceReport:
    """Full Lucas + level scan of one family's terms over the default grids."""
    lucas_primes = primes_upto(prime_bound)
    super_primes = primes_upto(prime_bound, super_min_prime)
    report = CongruenceReport(
        family=family,
        n_max=n_max,
        r_max=r_max,
        lucas_primes=lucas_primes,
        super_primes=super_primes,
    )
    for p in lucas_primes:
        report.lucas[p] = lucas_check(terms, p, n_max)
    report.ell = max_ell(terms, super_primes, n_max, r_max)
    return report


def report_to_json(report: CongruenceReport) -> str:
    return json.dumps(report.to_json(), indent=2)
