"""Bivariate formal verification of the Legendre generating function identities.

The generating function F(x;z) = sum C(2n,n)^2 P_n(x) z^n is never
evaluated analytically.  Each check works with exact polynomials
truncated by total degree: the product identity writes F at the
symmetric argument pair as a product of two square-root-kernel series,
and the two-variable self-replicating identity substitutes the quadratic
transformation into both sides and compares coefficients.

Homogenization clears every denominator: (U-V)^n P_n((U+V-2UV)/(U-V))
is a genuine polynomial because P_n has degree n.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .exact import Exact, norm
from .powerseries import TruncatedSeries


class BivariatePoly:
    """Exact polynomial in two variables, truncated by total degree."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: dict, degree: int):
        self.degree = degree
        self.terms = {
            ij: norm(c) for ij, c in terms.items() if c and ij[0] + ij[1] <= degree
        }

    @classmethod
    def zero(cls, degree: int) -> "BivariatePoly":
        return cls({}, degree)

    @classmethod
    def const(cls, value, degree: int) -> "BivariatePoly":
        return cls({(0, 0): value}, degree)

    @classmethod
    def variable(cls, which: str, degree: int) -> "BivariatePoly":
        ij = (1, 0) if which == "u" else (0, 1)
        return cls({ij: 1}, degree)

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other) -> "BivariatePoly":
        d = min(self.degree, other.degree)
        out = dict(self.terms)
        for ij, c in other.terms.items():
            out[ij] = out.get(ij, 0) + c
        return BivariatePoly(out, d)

    def __sub__(self, other) -> "BivariatePoly":
        return self + other.scale(-1)

    def scale(self, factor) -> "BivariatePoly":
        return BivariatePoly({ij: c * factor for ij, c in self.terms.items()}, self.degree)

    def __mul__(self, other) -> "BivariatePoly":
        d = min(self.degree, other.degree)
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                i, j = i1 + i2, j1 + j2
                if i + j <= d:
                    key = (i, j)
                    out[key] = out.get(key, 0) + c1 * c2
        return BivariatePoly(out, d)

    def pow(self, e: int) -> "BivariatePoly":
        result = BivariatePoly.const(1, self.degree)
        for _ in range(e):
            result = result * self
        return result

    def recip(self) -> "BivariatePoly":
        """Inverse in the truncated ring (unit constant term required)."""
        c0 = self.terms.get((0, 0), 0)
        if not c0:
            raise ZeroDivisionError("inverse needs a nonzero constant term")
        inv0 = norm(Fraction(1) / Fraction(c0))
        rest = BivariatePoly(
            {ij: c for ij, c in self.terms.items() if ij != (0, 0)}, self.degree
        ).scale(inv0)
        # Neumann series: 1/(c0 (1 + rest)) = inv0 * sum (-rest)^k
        out = BivariatePoly.const(1, self.degree)
        term = BivariatePoly.const(1, self.degree)
        for _ in range(self.degree):
            term = (term * rest).scale(-1)
            out = out + term
        return out.scale(inv0)

    def substitute_squares(self, degree: int) -> "BivariatePoly":
        """Map (U, V) -> (u^2, v^2); the total degree doubles."""
        return BivariatePoly(
            {(2 * i, 2 * j): c for (i, j), c in self.terms.items()}, degree
        )

    def diagonal(self) -> TruncatedSeries:
        """Substitute both variables equal; exact through the total degree."""
        coeffs = [0] * (self.degree + 1)
        for (i, j), c in self.terms.items():
            coeffs[i + j] += c
        return TruncatedSeries(coeffs)

    def graded_equal_through(self, other) -> int:
        """Largest total degree d with all monomials of degree <= d equal."""
        d_max = min(self.degree, other.degree)
        bad = [
            i + j
            for (i, j) in set(self.terms) | set(other.terms)
            if i + j <= d_max and self.terms.get((i, j), 0) != other.terms.get((i, j), 0)
        ]
        return min(bad) - 1 if bad else d_max


# ---------------------------------------------------------------------------
# Legendre polynomials, two closed forms.
# ---------------------------------------------------------------------------


def legendre_poly(n: int) -> tuple[Exact, ...]:
    """Coefficients of P_n(x) from the binomial form
    2^-n sum_k C(n,k)^2 (x-1)^k (x+1)^(n-k)."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    xm = TruncatedSeries([-1, 1], n)
    xp = TruncatedSeries([1, 1], n)
    acc = TruncatedSeries([0], n)
    xm_pow = TruncatedSeries.one(n)
    xp_pows = [TruncatedSeries.one(n)]
    for _ in range(n):
        xp_pows.append(xp_pows[-1] * xp)
    for k in range(n + 1):
        acc = acc + (xm_pow * xp_pows[n - k]) * comb(n, k) ** 2
        xm_pow = xm_pow * xm
    return tuple(norm(Fraction(c, 2**n)) for c in acc.coeffs)


def legendre_poly_hypergeometric(n: int) -> tuple[Exact, ...]:
    """Coefficients of P_n(x) from the terminating 2F1 form at (1-x)/2."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    arg = TruncatedSeries([Fraction(1, 2), Fraction(-1, 2)], n)
    acc = TruncatedSeries([0], n)
    coeff = Fraction(1)
    arg_pow = TruncatedSeries.one(n)
    for k in range(n + 1):
        acc = acc + arg_pow * coeff
        # (-n)_k (n+1)_k / (k!)^2, updated incrementally
        coeff = coeff * Fraction((-n + k) * (n + 1 + k), (k + 1) ** 2)
        arg_pow = arg_pow * arg
    return tuple(norm(c) for c in acc.coeffs)


def gauss_coefficient(n: int) -> Fraction:
    """Taylor coefficient C(2n,n)^2 / 16^n of the square-root kernel series."""
    return Fraction(comb(2 * n, n) ** 2, 16**n)


def homogenized_term(n: int, degree: int) -> BivariatePoly:
    """C(2n,n)^2 (U-V)^n P_n((U+V-2UV)/(U-V)) / 16^n as a polynomial.

    Built as sum_j p_nj (U+V-2UV)^j (U-V)^(n-j), which clears the
    denominator because P_n has degree exactly n.
    """
    p = legendre_poly(n)
    num = BivariatePoly({(1, 0): 1, (0, 1): 1, (1, 1): -2}, degree)  # U+V-2UV
    dif = BivariatePoly({(1, 0): 1, (0, 1): -1}, degree)  # U-V
    num_pows = [BivariatePoly.const(1, degree)]
    dif_pows = [BivariatePoly.const(1, degree)]
    for _ in range(n):
        num_pows.append(num_pows[-1] * num)
        dif_pows.append(dif_pows[-1] * dif)
    acc = BivariatePoly.zero(degree)
    for j, pj in enumerate(p):
        if pj:
            acc = acc + (num_pows[j] * dif_pows[n - j]).scale(pj)
    return acc.scale(gauss_coefficient(n))


def bailey_brafman_check(degree: int) -> int:
    """Verified total degree of the two-variable product identity.

    sum_n homogenized_term(n) must equal the product of the two
    square-root kernel series in U and V separately.
    """
    lhs = BivariatePoly.zero(degree)
    for n in range(degree + 1):
        lhs = lhs + homogenized_term(n, degree)
    series_u = BivariatePoly(
        {(n, 0): gauss_coefficient(n) for n in range(degree + 1)}, degree
    )
    series_v = BivariatePoly(
        {(0, n): gauss_coefficient(n) for n in range(degree + 1)}, degree
    )
    return lhs.graded_equal_through(series_u * series_v)


def leg_identity_check(degree: int) -> int:
    """Verified total degree of the two-variable self-replicating identity.

    Left side: F at the squared arguments (U,V) -> (u^2, v^2).  Right
    side: 1/((1+u)(1+v)) times F at the transformed argument pair, with
    numerator (1+uv)(u+v)-4uv and denominator (1-uv)(u-v) homogenized so
    only polynomial arithmetic appears; the map argument is
    (1-uv)(u-v)/(4(1+u)^2(1+v)^2).
    """
    half = degree // 2
    lhs = BivariatePoly.zero(degree)
    for n in range(half + 1):
        lhs = lhs + homogenized_term(n, half).substitute_squares(degree)

    u = BivariatePoly.variable("u", degree)
    v = BivariatePoly.variable("v", degree)
    one = BivariatePoly.const(1, degree)
    uv = u * v
    num = (one + uv) * (u + v) - uv.scale(4)  # (1+uv)(u+v) - 4uv
    dif = (one - uv) * (u - v)  # (1-uv)(u-v)
    inv_q = ((one + u) * (one + v)).recip()
    inv_q2 = inv_q * inv_q
    num_pows = [one]
    dif_pows = [one]
    for _ in range(degree):
        num_pows.append(num_pows[-1] * num)
        dif_pows.append(dif_pows[-1] * dif)
    rhs = BivariatePoly.zero(degree)
    invq2_pow = one
    quarter = Fraction(1, 4)
    for n in range(degree + 1):
        p = legendre_poly(n)
        inner = BivariatePoly.zero(degree)
        for j, pj in enumerate(p):
            if pj:
                inner = inner + (num_pows[j] * dif_pows[n - j]).scale(pj)
        rhs = rhs + (inner * invq2_pow).scale(comb(2 * n, n) ** 2 * quarter**n)
        invq2_pow = invq2_pow * inv_q2
    rhs = rhs * inv_q
    return lhs.graded_equal_through(rhs)
