"""Exact power-series kernel tests: worked examples plus algebraic laws."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfrep.powerseries import (
    NonSquareConstant,
    NonzeroInnerConstant,
    PoleAtOrigin,
    RationalFunction,
    TruncatedSeries,
    ZeroConstantTerm,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=8
)


def series(coeffs, order=None):
    return TruncatedSeries(coeffs, order)


series_strategy = st.lists(rationals, min_size=1, max_size=8).map(TruncatedSeries)


class TestMul:
    def test_difference_of_squares(self):
        assert (series([1, 1], 2) * series([1, -1], 2)).coeffs == (1, 0, -1)

    def test_geometric_square(self):
        geo = series([1, 1, 1, 1])
        assert (geo * geo).coeffs == (1, 2, 3, 4)

    def test_level2_inner_square(self):
        sq = series([1, 12, 420]) * series([1, 12, 420])
        assert sq.coeffs == (1, 24, 984)

    def test_order_truncates_to_smaller(self):
        out = series([1, 1, 1, 1]) * series([1, 1])
        assert out.order == 1

    @given(a=series_strategy, b=series_strategy)
    def test_commutative(self, a, b):
        assert a * b == b * a

    @given(a=series_strategy, b=series_strategy, c=series_strategy)
    @settings(max_examples=50)
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)


class TestRecip:
    def test_identity(self):
        assert series([1, 0, 0]).recip().coeffs == (1, 0, 0)

    def test_geometric(self):
        assert series([1, 1], 3).recip().coeffs == (1, -1, 1, -1)

    def test_ratio_four(self):
        assert series([1, 4], 2).recip().coeffs == (1, -4, 16)

    def test_zero_constant_rejected(self):
        with pytest.raises(ZeroConstantTerm):
            series([0, 1]).recip()

    @given(a=series_strategy)
    def test_times_inverse_is_one(self, a):
        if a[0] == 0:
            with pytest.raises(ZeroConstantTerm):
                a.recip()
        else:
            assert (a * a.recip()).is_one()


class TestCompose:
    def test_identity_substitution(self):
        f = series([3, 1, 4, 1])
        assert f.compose(TruncatedSeries.x(f.order)) == f

    def test_monomial_substitution(self):
        out = series([1, 1, 1], 4).compose(series([0, 0, 1], 4))
        assert out.coeffs == (1, 0, 1, 0, 1)

    def test_linear_into_cubic_map(self):
        inner = RationalFunction((0, 1), (1, 12, 48, 64)).expand(2)
        out = series([1, 4], 2).compose(inner)
        assert out.coeffs == (1, 4, -48)

    def test_nonzero_constant_rejected(self):
        with pytest.raises(NonzeroInnerConstant):
            series([1, 1]).compose(series([1, 1]))

    @given(a=series_strategy, b=series_strategy, c=series_strategy)
    @settings(max_examples=40)
    def test_associativity(self, a, b, c):
        b = TruncatedSeries([0, *b.coeffs])
        c = TruncatedSeries([0, *c.coeffs])
        n = min(a.order, b.order, c.order)
        a, b, c = a.truncate(n), b.truncate(n), c.truncate(n)
        assert a.compose(b).compose(c) == a.compose(b.compose(c))


class TestExpandRational:
    def test_cubic_denominator_map(self):
        # verified by multiplying back: result * (1+4z)^3 = z
        out = RationalFunction((0, 1), (1, 12, 48, 64)).expand(3)
        assert out.coeffs == (0, 1, -12, 96)
        back = out * TruncatedSeries([1, 12, 48, 64], 3)
        assert back.coeffs == (0, 1, 0, 0)

    def test_geometric(self):
        assert RationalFunction((1,), (1, -1)).expand(2).coeffs == (1, 1, 1)

    def test_long_division(self):
        assert RationalFunction((1, -1), (1, 3)).expand(2).coeffs == (1, -4, 12)

    def test_pole_rejected(self):
        with pytest.raises(PoleAtOrigin):
            RationalFunction((1,), (0, 1)).expand(3)

    @given(
        num=st.lists(st.integers(-9, 9), min_size=1, max_size=4),
        den=st.lists(st.integers(-9, 9), min_size=1, max_size=4),
        order=st.integers(1, 8),
    )
    @settings(max_examples=60)
    def test_expansion_times_denominator_is_numerator(self, num, den, order):
        if den[0] == 0 or not any(den):
            return
        rf = RationalFunction(num, den)
        got = rf.expand(order) * TruncatedSeries(rf.den, order)
        assert got == TruncatedSeries(rf.num, order)


class TestSqrt:
    def test_one(self):
        assert series([1, 0]).sqrt().coeffs == (1, 0)

    def test_perfect_square(self):
        assert series([1, 2, 1]).sqrt().coeffs == (1, 1, 0)

    def test_split_sequence(self):
        c = series([1, 12, 168, 2496])
        assert c.sqrt().coeffs == (1, 6, 66, 852)

    def test_non_square_rejected(self):
        with pytest.raises(NonSquareConstant):
            series([2, 1]).sqrt()

    @given(a=series_strategy)
    @settings(max_examples=60)
    def test_square_then_sqrt(self, a):
        shifted = TruncatedSeries([1, *a.coeffs])
        sq = shifted * shifted
        assert sq.sqrt() == shifted.truncate(sq.order)


class TestDerivative:
    def test_constant(self):
        assert series([1]).derivative().coeffs == (0,)

    def test_square(self):
        assert series([0, 0, 1]).derivative().coeffs == (0, 2)

    def test_order_drops(self):
        assert series([1, 2, 3, 4]).derivative().order == 2

    def test_u_series_first_coefficient(self):
        from selfrep.sequences import u_recurrence

        u = TruncatedSeries(u_recurrence(4))
        assert u.derivative()[0] == 4


class TestRationalFunction:
    def test_canonical_reduction(self):
        assert RationalFunction((2, 4), (2,)) == RationalFunction((1, 2), (1,))
        assert RationalFunction((1,), (-1, -2)) == RationalFunction((-1,), (1, 2))

    def test_valuation(self):
        assert RationalFunction((0, 1), (1, 4)).valuation() == 1
        assert RationalFunction((0, 0, 1), (1, 2)).valuation() == 2

    def test_derivative_quotient_rule(self):
        rf = RationalFunction((0, 1), (1, 4))  # z/(1+4z) -> 1/(1+4z)^2
        assert rf.derivative() == RationalFunction((1,), (1, 8, 16))

    def test_eval_matches_expand(self):
        rf = RationalFunction((0, 1), (1, 12, 48, 64))
        x = Fraction(1, 100)
        direct = rf.eval(x)
        horner = sum(c * x**k for k, c in enumerate(rf.expand(30).coeffs))
        assert abs(direct - horner) < Fraction(1, 10**40)
