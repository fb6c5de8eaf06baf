"""Congruence scan tests over explicit grids."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfrep import congruences as cg
from selfrep import sequences as seq


class TestDigits:
    @pytest.mark.parametrize("n,p,want", [(5, 3, [2, 1]), (0, 7, [0]), (49, 7, [0, 0, 1])])
    def test_examples(self, n, p, want):
        assert cg.base_p_digits(n, p) == want

    @given(n=st.integers(0, 10**9), p=st.integers(2, 97))
    def test_reconstruction(self, n, p):
        digits = cg.base_p_digits(n, p)
        assert all(0 <= d < p for d in digits)
        assert sum(d * p**i for i, d in enumerate(digits)) == n
        if n:
            assert digits[-1] != 0


class TestLucas:
    def test_u7_passes_mod3(self):
        terms = seq.family_terms("u7", 200)
        assert cg.lucas_check(terms, 3, 200) is None
        # spot value: u_5 = 273504 factors as u(2)*u(1) mod 3
        assert terms[5] % 3 == (terms[2] * terms[1]) % 3 == 0

    def test_nonholonomic_family_fails_mod5(self):
        terms = seq.family_terms("c:-4,2", 200)
        cx = cg.lucas_check(terms, 5, 200)
        assert cx is not None
        digits = cg.base_p_digits(cx.n, 5)
        prod = 1
        for d in digits:
            prod *= terms[d]
        assert (terms[cx.n] - prod) % 5 != 0

    def test_nonholonomic_family_passes_mod2(self):
        terms = seq.family_terms("c:-4,2", 200)
        assert cg.lucas_check(terms, 2, 200) is None

    def test_small_bound_degenerates_to_trivial(self):
        # N < p: every index is a single digit
        assert cg.lucas_check(list(range(1, 12)), 13, 10) is None

    def test_needs_enough_terms(self):
        with pytest.raises(ValueError):
            cg.lucas_check([1, 2], 5, 10)


class TestSuper:
    def test_central_cube_level3(self):
        terms = seq.family_terms("fhat4", 650)
        assert cg.super_check(terms, 5, 3, 4, 650) is None

    def test_level1_weight8_level2(self):
        terms = seq.family_terms("c:16,256", 650)
        assert cg.super_check(terms, 5, 2, 4, 650) is None

    def test_algebraic_family_fails_level2(self):
        terms = seq.family_terms("c:-1,1", 650)
        cx = cg.super_check(terms, 5, 2, 4, 650)
        assert cx is not None
        assert (terms[cx.m * 5**cx.r] - terms[cx.m * 5 ** (cx.r - 1)]) % cx.modulus != 0

    def test_level_zero_trivial(self):
        assert cg.super_check([1, 2, 3, 4, 5], 2, 0, 3, 4) is None

    def test_monotone_in_level(self):
        terms = seq.family_terms("u7", 400)
        for p in (5, 7, 11):
            passing = [ell for ell in (1, 2, 3) if cg.super_check(terms, p, ell, 4, 400) is None]
            # pass at ell implies pass at every lower level
            assert passing == list(range(1, len(passing) + 1))


class TestMaxEll:
    def test_u7_at_least_level1(self):
        terms = seq.family_terms("u7", 400)
        ells = cg.max_ell(terms, cg.primes_upto(20), 400)
        assert all(e >= 1 for e in ells.values())

    def test_weight4_family_level3(self):
        terms = seq.family_terms("c:4,16", 400)
        ells = cg.max_ell(terms, cg.primes_upto(13, 5), 400)
        assert all(e == 3 for e in ells.values())

    def test_constant_sequence_trivially_level3(self):
        ells = cg.max_ell([1] * 401, [5, 7], 400)
        assert ells == {5: 3, 7: 3}


class TestReport:
    def test_report_round_trip(self):
        terms = seq.family_terms("u7", 400)
        report = cg.run_report("u7", terms, prime_bound=11, n_max=400)
        data = report.to_json()
        assert data["family"] == "u7"
        assert set(data["lucas"]) == {"2", "3", "5", "7", "11"}
        assert all(v == "pass" for v in data["lucas"].values())
        assert set(data["max_ell"]) == {"5", "7", "11"}
        csv_text = report.to_csv()
        assert csv_text.splitlines()[0] == "family,p,lucas,max_ell,N"
        assert len(csv_text.splitlines()) == 6

    def test_counterexamples_serialized(self):
        terms = seq.family_terms("c:-4,2", 400)
        report = cg.run_report("c:-4,2", terms, prime_bound=7, n_max=400)
        assert report.lucas[5] is not None
        assert isinstance(report.to_json()["lucas"]["5"], dict)
