"""Formal q-expansions of the weight-two data behind the named series.

For levels 2, 3, 4, 5, 7 the series z_level = q * prod_j ((1-q^(level*j)) /
(1-q^j))^e with e = 24/(level-1) is expanded exactly as a formal power
series in q (no analytic variable anywhere), along with its logarithmic
derivative p_level = q d/dq log z_level.  The parametrization check
composes a named family's series with the algebraic change of variable
x(z_level) and compares against p_level, coefficient by coefficient.

Truncating the product at j <= N is exact: the factor at j first
contributes at order j.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sequences
from .powerseries import RationalFunction, TruncatedSeries

LEVELS = (2, 3, 4, 5, 7)

_EXPONENT = {lvl: 24 // (lvl - 1) for lvl in LEVELS}

# denominator of x = z / (...) in the identity p_level = f(x(z_level))
_X_DENOM = {
    2: (1, 64),
    3: (1, 27),
    4: (1, 16),
    5: (1, 22, 125),
    7: (1, 13, 49),
}

_FAMILY = {2: "f2", 3: "f3", 4: "f4", 5: "f5", 7: "u7"}


class UnsupportedLevel(ValueError):
    """Only levels 2, 3, 4, 5, 7 carry expansion data."""


def _check_level(level: int):
    if level not in LEVELS:
        raise UnsupportedLevel(f"level must be one of {LEVELS}, got {level}")


@dataclass(frozen=True)
class QSeries:
    """A truncated expansion in the formal variable q, tagged with its level."""

    series: TruncatedSeries
    level: int
    exponent: int

    @property
    def coeffs(self):
        return self.series.coeffs

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "exponent": self.exponent,
            "coeffs": [str(c) for c in self.coeffs],
        }


def _unit_part(level: int, order: int) -> TruncatedSeries:
    """prod_j ((1-q^(level*j))/(1-q^j))^e to the given order."""
    e = _EXPONENT[level]
    u = TruncatedSeries.one(order)
    for j in range(1, order + 1):
        # 1/(1-q^j) is the geometric series in q^j
        geom = [0] * (order + 1)
        for i in range(0, order + 1, j):
            geom[i] = 1
        u = u * TruncatedSeries(geom).pow(e)
        if level * j <= order:
            factor = [0] * (order + 1)
            factor[0] = 1
            factor[level * j] = -1
            u = u * TruncatedSeries(factor).pow(e)
    return u


def z_level(level: int, order: int) -> QSeries:
    """Exact expansion of the eta-type product, q + O(q^2)."""
    _check_level(level)
    if order < 1:
        raise ValueError("order must be >= 1")
    unit = _unit_part(level, order - 1)
    coeffs = [0, *unit.coeffs]
    return QSeries(TruncatedSeries(coeffs, order), level, _EXPONENT[level])


def p_level(level: int, order: int) -> QSeries:
    """q d/dq log z_level = 1 + q u'/u for z_level = q u(q)."""
    _check_level(level)
    if order < 1:
        raise ValueError("order must be >= 1")
    unit = _unit_part(level, order)
    ratio = unit.x_derivative() * unit.recip()
    coeffs = list(ratio.coeffs[: order + 1])
    coeffs[0] += 1
    return QSeries(TruncatedSeries(coeffs, order), level, _EXPONENT[level])


def x_of_z(level: int, order: int) -> TruncatedSeries:
    """The algebraic argument x(z_level) expanded as a q-series."""
    _check_level(level)
    x_map = RationalFunction((0, 1), _X_DENOM[level])
    return x_map.expand(order).compose(z_level(level, order).series)


def level_family(level: int) -> str:
    _check_level(level)
    return _FAMILY[level]


def parametrization_check(level: int, order: int) -> int:
    """Largest order through which f(x(z_level)) agrees with p_level."""
    _check_level(level)
    f = TruncatedSeries(sequences.family_terms(_FAMILY[level], order))
    composed = f.compose(x_of_z(level, order))
    target = p_level(level, order).series
    for k in range(order + 1):
        if composed[k] != target[k]:
            return k - 1
    return order
