"""Exact scalar helpers shared across the package.

Scalars are "exact rationals": plain Python ints where the value is
integral, ``fractions.Fraction`` otherwise.  Keeping integers as ints (and
normalising integral fractions back to int) makes the hot convolution
loops run on native integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, isqrt

Exact = int | Fraction


def norm(x: Exact) -> Exact:
    """Collapse integral fractions to int; reject inexact input."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def as_fraction(x: Exact) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def binom(m: int, r: int) -> int:
    """Binomial coefficient with the conventions the sequence sums need.

    r < 0 or (0 <= m < r) gives 0.  Negative m uses the generalised
    falling-factorial value m(m-1)...(m-r+1)/r!, i.e.
    binom(-m, r) = (-1)^r * binom(m+r-1, r).
    """
    if r < 0:
        return 0
    if m >= 0:
        return comb(m, r) if m >= r else 0
    val = comb(-m + r - 1, r)
    return -val if r & 1 else val


def rational_sqrt(x: Exact) -> Exact:
    """Exact square root of a perfect-square rational.

    Raises ValueError when x is negative or not a perfect square.
    """
    f = as_fraction(x)
    if f < 0:
        raise ValueError(f"negative radicand {x}")
    rn, rd = isqrt(f.numerator), isqrt(f.denominator)
    if rn * rn != f.numerator or rd * rd != f.denominator:
        raise ValueError(f"{x} is not the square of a rational")
    return norm(Fraction(rn, rd))


def content(coeffs) -> int:
    """gcd of a list of integers (0 lists give 1)."""
    g = 0
    for c in coeffs:
        g = gcd(g, c)
        if g == 1:
            return 1
    return g or 1
