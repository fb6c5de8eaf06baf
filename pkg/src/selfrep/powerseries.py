"""Truncated formal power series over exact rationals.

Every verification in this package bottoms out here, so the arithmetic is
exact by construction: coefficients are ints or ``Fraction``s, never
floats.  A series carries an inclusive truncation order N and exactly
N+1 coefficients; binary operations truncate to the smaller order, which
matches formal-series semantics (no error is raised for mismatched
orders).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exact import Exact, content, norm, rational_sqrt


class ZeroConstantTerm(ArithmeticError):
    """Reciprocal of a series with zero constant term."""


class NonzeroInnerConstant(ValueError):
    """Composition with an inner series whose constant term is nonzero."""


class PoleAtOrigin(ZeroDivisionError):
    """Expansion at 0 of a rational function with a vanishing denominator there."""


class NonSquareConstant(ValueError):
    """Square root of a series whose constant term is not a rational square."""


def _conv(a: Sequence[Exact], b: Sequence[Exact], order: int) -> list[Exact]:
    """Cauchy product coefficients 0..order (inputs assumed long enough)."""
    out = []
    for n in range(order + 1):
        acc = 0
        for i in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc += a[i] * b[n - i]
        out.append(norm(acc) if isinstance(acc, Fraction) else acc)
    return out


class TruncatedSeries:
    """Immutable power series truncated at an inclusive order."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Exact], order: int | None = None):
        c = [norm(x) for x in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            c = c[: order + 1] + [0] * (order + 1 - len(c))
        elif not c:
            raise ValueError("a series needs at least the constant coefficient")
        self._c = tuple(c)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    @property
    def coeffs(self) -> tuple[Exact, ...]:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __getitem__(self, k: int) -> Exact:
        return self._c[k]

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        head = ", ".join(str(c) for c in self._c[:6])
        tail = ", ..." if len(self._c) > 6 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None for the zero series."""
        for i, c in enumerate(self._c):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self._c, order)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self._c])

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([other], self.order)
        return other

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return TruncatedSeries([self._c[i] + other._c[i] for i in range(n + 1)])

    __radd__ = __add__

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([norm(other * c) for c in self._c])
        n = min(self.order, other.order)
        return TruncatedSeries(_conv(self._c, other._c, n))

    __rmul__ = __mul__

    def recip(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        if not self._c[0]:
            raise ZeroConstantTerm("cannot invert a series with constant term 0")
        n = self.order
        c0 = as_frac(self._c[0])
        inv = [norm(1 / c0)]
        for k in range(1, n + 1):
            acc = 0
            for i in range(1, k + 1):
                if self._c[i]:
                    acc += self._c[i] * inv[k - i]
            inv.append(norm(-as_frac(acc) / c0))
        return TruncatedSeries(inv)

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return self * norm(1 / as_frac(other))
        return self * other.recip()

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner) via Horner's scheme; inner must vanish at 0."""
        if inner._c[0]:
            raise NonzeroInnerConstant("inner series must have zero constant term")
        n = min(self.order, inner.order)
        inner_c = inner._c[: n + 1]
        acc = [self._c[n]] + [0] * n
        for k in range(n - 1, -1, -1):
            acc = _conv(acc, inner_c, n)
            acc[0] += self._c[k]
        return TruncatedSeries(acc)

    def sqrt(self) -> "TruncatedSeries":
        """Formal square root with rational coefficients.

        The constant term must be a square of a rational (typically 1);
        raises NonSquareConstant otherwise.
        """
        try:
            d0 = rational_sqrt(self._c[0])
        except ValueError as exc:
            raise NonSquareConstant(str(exc)) from exc
        if d0 == 0:
            raise NonSquareConstant("constant term must be a nonzero square")
        d = [d0]
        for n in range(1, self.order + 1):
            acc = 0
            for k in range(1, n):
                acc += d[k] * d[n - k]
            d.append(norm((as_frac(self._c[n]) - acc) / (2 * d0)))
        return TruncatedSeries(d)

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            return TruncatedSeries([0])
        return TruncatedSeries([norm((k + 1) * self._c[k + 1]) for k in range(self.order)])

    def x_derivative(self) -> "TruncatedSeries":
        """x * d/dx, which keeps the truncation order."""
        return TruncatedSeries([norm(k * c) for k, c in enumerate(self._c)])

    def pow(self, e: int) -> "TruncatedSeries":
        """Integer power by repeated squaring (e >= 0)."""
        if e < 0:
            return self.recip().pow(-e)
        result = TruncatedSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def is_one(self) -> bool:
        return self._c[0] == 1 and not any(self._c[1:])


def as_frac(x: Exact) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _poly_trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def poly_pow(a: Sequence[int], e: int) -> tuple[int, ...]:
    out = (1,)
    for _ in range(e):
        out = poly_mul(out, a)
    return out


class RationalFunction:
    """Quotient of integer-coefficient polynomials, gcd-reduced.

    Coefficient tuples are ascending.  The canonical form divides out the
    content of numerator and denominator jointly and normalises the sign
    so the denominator's first nonzero coefficient is positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[int], den: Sequence[int] = (1,)):
        num = _poly_trim([int(c) for c in num])
        den = _poly_trim([int(c) for c in den])
        if not any(den):
            raise ZeroDivisionError("denominator polynomial is identically zero")
        g = content(list(num) + list(den))
        lead = next(c for c in den if c)
        if lead < 0:
            g = -g
        self.num = tuple(c // g for c in num)
        self.den = tuple(c // g for c in den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({list(self.num)}, {list(self.den)})"

    def is_one(self) -> bool:
        return self.num == self.den

    def expand(self, order: int) -> TruncatedSeries:
        """Exact Taylor expansion at 0; the denominator must not vanish there."""
        if self.den[0] == 0:
            raise PoleAtOrigin("denominator vanishes at 0")
        num = TruncatedSeries(self.num, order)
        den = TruncatedSeries(self.den, order)
        return num * den.recip()

    def derivative(self) -> "RationalFunction":
        dn = tuple((i + 1) * c for i, c in enumerate(self.num[1:])) or (0,)
        dd = tuple((i + 1) * c for i, c in enumerate(self.den[1:])) or (0,)
        num = [a - b for a, b in _pad(poly_mul(dn, self.den), poly_mul(self.num, dd))]
        return RationalFunction(num, poly_mul(self.den, self.den))

    def eval(self, x):
        """Evaluate by Horner at an exact or big-float point."""
        n = 0
        for c in reversed(self.num):
            n = n * x + c
        d = 0
        for c in reversed(self.den):
            d = d * x + c
        return n / d

    def valuation(self) -> int:
        """Order of vanishing of the function at 0 (numerator valuation)."""
        for i, c in enumerate(self.num):
            if c:
                return i - next(j for j, d in enumerate(self.den) if d)
        raise ValueError("zero rational function has no valuation")

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.num], "den": [str(c) for c in self.den]}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return cls([int(c) for c in data["num"]], [int(c) for c in data["den"]])


def _pad(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))
