"""Sequence family tests: worked values, route agreement, integrality."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfrep import sequences as seq
from selfrep.exact import binom
from selfrep.sequences import (
    AperyRecurrence,
    InexactDivision,
    NotSplittable,
    UnknownFamily,
    conv_square_nonneg,
)


class TestBinomialConventions:
    def test_out_of_range_is_zero(self):
        assert binom(0, 1) == 0
        assert binom(3, 6) == 0
        assert binom(5, -1) == 0

    def test_negative_top_is_generalized(self):
        # falling-factorial values, needed by the alternating cube family
        assert binom(-1, 3) == -1
        assert binom(-2, 6) == 7
        assert binom(-3, 9) == -55


class TestUSequence:
    def test_first_values(self):
        assert [seq.u_binomial(n) for n in range(5)] == [1, 4, 48, 760, 13840]

    def test_both_binomial_forms_agree(self):
        for n in range(60):
            assert seq.u_binomial(n) == seq.u_binomial_alt(n)

    def test_recurrence_start(self):
        assert seq.u_recurrence(1) == [1, 4]

    def test_recurrence_prefix(self):
        assert seq.u_recurrence(4) == [1, 4, 48, 760, 13840]

    def test_recurrence_matches_binomial(self):
        got = seq.u_recurrence(40)
        assert got == [seq.u_binomial(n) for n in range(41)]

    def test_perturbed_recurrence_detected(self):
        # (2n+1)(13n^2+13n+4) with 13n^2 -> 14n^2 expands to (4,21,40,28);
        # the corruption breaks division exactness at n=1
        bad = AperyRecurrence(lead=(1, 3, 3, 1), mid=(4, 21, 40, 28), trail=(0, -3, 0, 27))
        with pytest.raises(InexactDivision, match="n=1"):
            bad.terms(5)


class TestCubicShapeRecursion:
    def test_level7_pair(self):
        assert seq.c_lambda_mu(2, 4, 4) == [1, 4, 48, 760, 13840]

    def test_algebraic_pair(self):
        # closed form 2^n C(2n,n)
        assert seq.c_lambda_mu(-1, 1, 3) == [1, 4, 24, 160]

    def test_nonholonomic_pair(self):
        assert seq.c_lambda_mu(-4, 2, 5) == [1, 12, 168, 2496, 38328, 600672]

    def test_degenerate_diagonal(self):
        assert seq.c_lambda_mu(7, 7, 6) == [1, 0, 0, 0, 0, 0, 0]
        assert seq.c_lambda_mu(-3, -3, 4) == [1, 0, 0, 0, 0]

    @given(lam=st.integers(-20, 20), mu=st.integers(-20, 20))
    @settings(max_examples=50)
    def test_second_coefficient_polynomial(self, lam, mu):
        c2 = 7 * mu**2 - 10 * lam * mu + 3 * lam**2 + 2 * mu - 2 * lam
        assert seq.c_lambda_mu(lam, mu, 2)[2] == c2

    @given(lam=st.integers(-30, 30), mu=st.integers(-30, 30))
    @settings(max_examples=30)
    def test_integrality(self, lam, mu):
        assert all(isinstance(v, int) for v in seq.c_lambda_mu(lam, mu, 12))

    def test_mod_route_agrees(self):
        full = seq.c_lambda_mu(5, -3, 60)
        mod = 5**6 * 7**4 * 11**2
        assert seq.c_lambda_mu(5, -3, 60, mod=mod) == [v % mod for v in full]


class TestVariantShapeRecursion:
    def test_central_binomial(self):
        assert seq.c_variant(-2, 0, 3) == [1, 2, 6, 20]

    def test_alternating_central(self):
        assert seq.c_variant(0, -2, 3) == [1, -2, 6, -20]

    def test_central_squared(self):
        assert seq.c_variant(0, 4, 3) == [1, 4, 36, 400]

    def test_level2_pair_matches_squared_series(self):
        inner = [binom(2 * n, n) * binom(4 * n, 2 * n) for n in range(8)]
        sq = [int(v) for v in conv_square_nonneg(inner)]
        assert seq.c_variant(-8, 16, 7) == sq

    def test_shifted_family_closed_form(self):
        # (alpha+1)^n C(2n,n) for lambda = -alpha-2, mu = alpha
        for alpha in (-3, 2, 5):
            want = [(alpha + 1) ** n * binom(2 * n, n) for n in range(10)]
            assert seq.c_variant(-alpha - 2, alpha, 9) == want


class TestFamilies:
    @pytest.mark.parametrize(
        "fid,count,want",
        [
            ("gc", 4, [1, 2, 10, 56, 346]),
            ("f5", 2, [1, 6, 114]),
            ("fhat4", 3, [1, 8, 216, 8000]),
            ("gb", 4, [1, 3, 15, 93, 639]),
            ("g5", 4, [1, 3, 19, 147, 1251]),
            ("fhat5", 4, [1, -5, 35, -275, 2275]),
            ("f4", 3, [1, 8, 88, 1088]),
        ],
    )
    def test_prefixes(self, fid, count, want):
        assert seq.family_terms(fid, count) == want

    def test_direct_sums_match_kernels(self):
        # row-sum kernels against naive binomial sums
        for n in range(25):
            assert seq.family_terms("gb", n)[n] == sum(
                binom(n, k) ** 2 * binom(2 * k, k) for k in range(n + 1)
            )
            assert seq.family_terms("gc", n)[n] == sum(
                binom(n, k) ** 3 for k in range(n + 1)
            )
            assert seq.family_terms("g5", n)[n] == sum(
                binom(n, k) ** 2 * binom(n + k, k) for k in range(n + 1)
            )

    def test_f5_is_central_times_g5(self):
        b2 = [binom(2 * n, n) for n in range(15)]
        g5 = seq.family_terms("g5", 14)
        assert seq.family_terms("f5", 14) == [x * y for x, y in zip(b2, g5)]

    def test_fhat_families(self):
        for n in range(12):
            b2 = binom(2 * n, n)
            assert seq.family_terms("fhat2", n)[n] == b2**2 * binom(4 * n, 2 * n)
            assert seq.family_terms("fhat3", n)[n] == b2**2 * binom(3 * n, n)

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            seq.family_terms("nosuch", 3)
        with pytest.raises(UnknownFamily):
            seq.family_terms("c:1", 3)

    def test_tagged_pairs(self):
        assert seq.family_terms("c:-4,2", 6) == seq.c_lambda_mu(-4, 2, 6)
        assert seq.family_terms("cvar:0,4", 5) == seq.c_variant(0, 4, 5)

    def test_special_pair_closed_forms_match_recursion(self):
        for tag in ("c:-2,4", "c:4,16", "c:16,256", "c:-1,1"):
            _, lam, mu = seq.parse_family_id(tag)
            assert seq.family_terms(tag, 20) == seq.c_lambda_mu(lam, mu, 20)

    def test_cache_returns_copies(self):
        a = seq.family_terms("gc", 10)
        a[0] = 999
        assert seq.family_terms("gc", 10)[0] == 1


class TestConvolutionSplit:
    def test_nonholonomic_split(self):
        c = seq.c_lambda_mu(-4, 2, 6)
        assert seq.convolution_split(c) == [1, 6, 66, 852, 11874, 172860, 2586108]

    def test_trivial(self):
        assert seq.convolution_split([1, 0, 0]) == [1, 0, 0]

    def test_half_integer_blocked(self):
        out = seq.convolution_split([1, 1])
        assert isinstance(out, NotSplittable)
        assert out.first_bad_index == 1

    def test_split_squares_back(self):
        c = seq.c_lambda_mu(-4, 2, 12)
        d = seq.convolution_split(c)
        assert all(
            sum(d[k] * d[n - k] for k in range(n + 1)) == c[n] for n in range(13)
        )


class TestKroneckerSquare:
    @given(st.lists(st.integers(0, 10**12), min_size=1, max_size=120))
    @settings(max_examples=40)
    def test_matches_direct_convolution(self, vals):
        got = [int(v) for v in conv_square_nonneg(vals)]
        want = [
            sum(vals[i] * vals[n - i] for i in range(n + 1)) for n in range(len(vals))
        ]
        assert got == want

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            conv_square_nonneg([1, -2] * 40)


class TestExport:
    def test_lines(self):
        assert seq.format_terms([1, -4, 48]) == "1\n-4\n48\n"

    def test_json_strings(self):
        import json

        out = json.loads(seq.format_terms([1, 10**40], "json"))
        assert out == ["1", str(10**40)]
