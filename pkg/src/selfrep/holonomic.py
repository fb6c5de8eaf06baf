"""Guess and certify linear recurrences with polynomial coefficients.

Everything here is exact: candidate recurrences come out of a
fraction-free (Bareiss) nullspace computation over the integers, after a
fast modular rank test discards candidates that cannot have one.  There
are no tolerance parameters anywhere in this module.

A guess is only returned when it annihilates every supplied term, the
fitted ones and the held-out ones alike.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exact import content

# Deterministic primes for the modular rank prefilter.  The rational
# nullspace injects into every mod-p nullspace, so full column rank mod
# any single prime proves there is nothing to find exactly.
_FILTER_PRIMES = (2147483647, 2147483629, 2147483587)

HOLDOUT = 20


class InsufficientTerms(ValueError):
    """Too few terms for any candidate (order, degree) in the grid."""


@dataclass(frozen=True)
class RecurrenceGuess:
    """sum_i p_i(n) a(n+i) = 0 with integer polynomial coefficients.

    ``polys[i]`` holds the ascending coefficients of p_i; the leading
    polynomial p_r is nonzero and the vector of all coefficients is
    content-reduced with a deterministic sign.
    """

    order: int
    degree: int
    polys: tuple[tuple[int, ...], ...]
    verified_terms: int = 0
    ambiguous: bool = False

    def __post_init__(self):
        if not any(self.polys[-1]):
            raise ValueError("leading polynomial must be nonzero")

    def residual(self, terms, n: int):
        acc = 0
        for i, poly in enumerate(self.polys):
            acc += _peval(poly, n) * terms[n + i]
        return acc

    def operator_str(self) -> str:
        parts = []
        for i, poly in enumerate(self.polys):
            if not any(poly):
                continue
            parts.append(f"({_poly_str(poly)})*a(n+{i})" if i else f"({_poly_str(poly)})*a(n)")
        return " + ".join(parts) + " = 0"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "degree": self.degree,
            "polys": [[str(c) for c in poly] for poly in self.polys],
            "verified_terms": self.verified_terms,
            "ambiguous": self.ambiguous,
            "operator": self.operator_str(),
        }


def _poly_str(poly) -> str:
    terms = []
    for j, c in enumerate(poly):
        if not c:
            continue
        if j == 0:
            terms.append(str(c))
        else:
            mon = "n" if j == 1 else f"n^{j}"
            terms.append(f"{c}*{mon}" if abs(c) != 1 else (mon if c > 0 else f"-{mon}"))
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _peval(coeffs, n):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def _candidates(r_max: int, d_max: int):
    cands = [(r, d) for r in range(1, r_max + 1) for d in range(d_max + 1)]
    cands.sort(key=lambda rd: (rd[0] + rd[1], rd[0]))
    return cands


def _int_rows(terms, r: int, d: int, row_count: int):
    """Integer matrix rows [n^j * t_{n+i}] for n = 0..row_count-1."""
    rows = []
    for n in range(row_count):
        raw = []
        for i in range(r + 1):
            t = terms[n + i]
            npow = 1
            for j in range(d + 1):
                raw.append(t * npow)
                npow *= n
        if any(isinstance(v, Fraction) for v in raw):
            scale = lcm(*(v.denominator for v in raw if isinstance(v, Fraction)))
            raw = [int(v * scale) for v in raw]
        rows.append(raw)
    return rows


def _has_nullspace_mod(rows, p: int) -> bool:
    """True unless the matrix has full column rank mod p."""
    cols = len(rows[0])
    mat = [[v % p for v in row] for row in rows]
    rank = 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if pivot is None:
            return True  # free column
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        prow = mat[rank]
        for i in range(rank + 1, len(mat)):
            f = mat[i][c]
            if f:
                f = f * inv % p
                row = mat[i]
                for j in range(c, cols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == cols:
            return False
    return rank < cols


def _nullspace_exact(rows) -> list[list[Fraction]]:
    """Basis of the rational nullspace via fraction-free elimination."""
    mat = [list(r) for r in rows]
    n_rows, n_cols = len(mat), len(mat[0])
    prev = 1
    pivot_rows: list[tuple[int, int]] = []  # (row index, pivot column)
    rank = 0
    for c in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        piv = mat[rank][c]
        for i in range(rank + 1, n_rows):
            if any(mat[i][c:]):
                row = mat[i]
                f = row[c]
                for j in range(c, n_cols):
                    row[j] = (row[j] * piv - f * mat[rank][j]) // prev
        prev = piv
        pivot_rows.append((rank, c))
        rank += 1
        if rank == n_rows:
            break
    pivot_cols = {c for _, c in pivot_rows}
    basis = []
    for free in (c for c in range(n_cols) if c not in pivot_cols):
        x = [Fraction(0)] * n_cols
        x[free] = Fraction(1)
        for i, c in reversed(pivot_rows):
            if c > free:
                continue
            acc = Fraction(0)
            for j in range(c + 1, n_cols):
                if mat[i][j] and x[j]:
                    acc += mat[i][j] * x[j]
            x[c] = -acc / mat[i][c]
        basis.append(x)
    return basis


def _normalize(vec: list[Fraction]) -> list[int]:
    scale = lcm(*(v.denominator for v in vec)) if vec else 1
    ints = [int(v * scale) for v in vec]
    g = content(ints)
    ints = [v // g for v in ints]
    first = next((v for v in ints if v), 1)
    if first < 0:
        ints = [-v for v in ints]
    return ints


def verify_rec(polys, terms) -> int | None:
    """Exact check of sum_i p_i(n) a(n+i) = 0; None on pass, else first bad n."""
    r = len(polys) - 1
    for n in range(len(terms) - r):
        acc = 0
        for i, poly in enumerate(polys):
            acc += _peval(poly, n) * terms[n + i]
        if acc:
            return n
    return None


def guess(terms, r_max: int, d_max: int) -> RecurrenceGuess | None:
    """Minimal certified recurrence of order <= r_max, degree <= d_max.

    Candidates are tried in increasing order + degree (ties to lower
    order); for each, a modular rank test runs first and an exact
    nullspace only when it reports a possible solution.  Returns None
    when no candidate up to (r_max, d_max) survives certification on the
    full term list.  Raises InsufficientTerms when the term list cannot
    support even the smallest candidate.
    """
    if r_max < 1 or d_max < 0:
        raise ValueError("need r_max >= 1 and d_max >= 0")
    feasible = [
        (r, d)
        for r, d in _candidates(r_max, d_max)
        if len(terms) >= (r + 1) * (d + 1) + r + HOLDOUT
    ]
    if not feasible:
        raise InsufficientTerms(
            f"{len(terms)} terms cannot fit any candidate up to "
            f"order {r_max}, degree {d_max}"
        )
    for r, d in feasible:
        unknowns = (r + 1) * (d + 1)
        fit_rows = min(unknowns + 10, len(terms) - r)
        rows = _int_rows(terms, r, d, fit_rows)
        if not any(_has_nullspace_mod(rows, p) for p in _FILTER_PRIMES[:1]):
            continue
        basis = _nullspace_exact(rows)
        certified = []
        for vec in basis:
            ints = _normalize(vec)
            polys = tuple(
                tuple(ints[i * (d + 1) : (i + 1) * (d + 1)]) for i in range(r + 1)
            )
            if not any(polys[-1]):
                continue
            if verify_rec(polys, terms) is None:
                certified.append(polys)
        if not certified:
            continue
        certified.sort(key=_support_key)
        polys = certified[0]
        degree = max(
            (len(p) - 1 - next(i for i, c in enumerate(reversed(p)) if c))
            for p in polys
            if any(p)
        )
        return RecurrenceGuess(
            order=r,
            degree=degree,
            polys=polys,
            verified_terms=len(terms),
            ambiguous=len(certified) > 1,
        )
    return None


def _support_key(polys):
    flat = [c for poly in polys for c in poly]
    return tuple(i for i, c in enumerate(flat) if c)


def guess_report(terms, r_max: int, d_max: int) -> dict:
    """JSON-ready result with the search envelope (grid-relative verdict)."""
    result = guess(terms, r_max, d_max)
    report = {
        "r_max": r_max,
        "d_max": d_max,
        "terms_supplied": len(terms),
        "found": result is not None,
    }
    if result is not None:
        report["recurrence"] = result.to_json()
    return report


def read_terms_file(path) -> list[int]:
    """One decimal integer per line; blank lines ignored."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(int(line))
    return out


def guess_to_json(result: RecurrenceGuess | None) -> str:
    return json.dumps(None if result is None else result.to_json(), indent=2)
