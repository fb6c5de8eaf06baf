"""Recurrence guessing tests: recovery, certification, scale invariance."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfrep import holonomic as hol
from selfrep import sequences as seq
from selfrep.exact import binom

# the u-recurrence in standard ascending form: p_0 a(n) + p_1 a(n+1) + p_2 a(n+2) = 0
U7_STANDARD = (
    (-24, -78, -81, -27),  # -3(n+1)(3n+2)(3n+4)
    (-90, -177, -117, -26),  # -(2n+3)(13(n+1)^2+13(n+1)+4)
    (8, 12, 6, 1),  # (n+2)^3
)


def proportional(polys_a, polys_b) -> bool:
    flat_a = [c for p in polys_a for c in p]
    flat_b = [c for p in polys_b for c in p]
    if len(flat_a) != len(flat_b):
        return False
    ratio = None
    for x, y in zip(flat_a, flat_b):
        if (x == 0) != (y == 0):
            return False
        if x:
            r = Fraction(y, x)
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return ratio is not None


class TestGuess:
    def test_u7_recovers_three_term_recurrence(self):
        g = hol.guess(seq.family_terms("u7", 60), 3, 4)
        assert g is not None
        assert (g.order, g.degree) == (2, 3)
        assert proportional(g.polys, U7_STANDARD)
        assert not g.ambiguous

    def test_central_binomial(self):
        terms = [binom(2 * n, n) for n in range(41)]
        g = hol.guess(terms, 3, 4)
        assert (g.order, g.degree) == (1, 1)
        assert proportional(g.polys, ((2, 4), (-1, -1)))

    def test_nonholonomic_family_yields_none(self):
        assert hol.guess(seq.family_terms("c:-4,2", 250), 6, 8) is None

    def test_insufficient_terms(self):
        with pytest.raises(hol.InsufficientTerms):
            hol.guess([1, 2, 3], 2, 2)

    def test_large_candidates_skipped_but_small_found(self):
        # 40 terms cannot support (3,4) but the (1,1) answer still surfaces
        terms = [binom(2 * n, n) for n in range(41)]
        g = hol.guess(terms, 3, 8)
        assert (g.order, g.degree) == (1, 1)

    @given(
        scale=st.fractions(min_value=Fraction(1, 9), max_value=Fraction(9), max_denominator=9)
    )
    @settings(max_examples=15, deadline=None)
    def test_scale_invariance(self, scale):
        base = seq.family_terms("u7", 60)
        g0 = hol.guess(base, 3, 4)
        g1 = hol.guess([scale * t for t in base], 3, 4)
        assert (g1.order, g1.degree) == (g0.order, g0.degree)
        assert proportional(g1.polys, g0.polys)

    def test_factorial_like(self):
        # a(n+1) = (n+1) a(n)
        terms = [1]
        for n in range(30):
            terms.append(terms[-1] * (n + 1))
        g = hol.guess(terms, 2, 2)
        assert (g.order, g.degree) == (1, 1)
        assert proportional(g.polys, ((1, 1), (-1,) + (0,)))


class TestVerify:
    def test_transcription_passes(self):
        assert hol.verify_rec(U7_STANDARD, seq.family_terms("u7", 100)) is None

    def test_perturbed_transcription_fails_at_start(self):
        # 13 -> 14 in the quadratic factor: -(2n+3)(14(n+1)^2+13(n+1)+4)
        # expands to -(2n+3)(14n^2+41n+31); the residual picks up the term
        # -(2n+3)(n+1)^2 u_{n+1}, nonzero already at n=0
        bad_p1 = (-93, -185, -124, -28)
        bad = (U7_STANDARD[0], bad_p1, U7_STANDARD[2])
        assert hol.verify_rec(bad, seq.family_terms("u7", 100)) == 0

    def test_zero_leading_polynomial_rejected(self):
        with pytest.raises(ValueError):
            hol.RecurrenceGuess(order=1, degree=0, polys=((1,), (0,)))

    def test_guessed_recurrence_extends(self):
        g = hol.guess(seq.family_terms("u7", 60), 3, 4)
        long = seq.family_terms("u7", 300)
        assert hol.verify_rec(g.polys, long) is None


class TestReport:
    def test_envelope_in_report(self):
        report = hol.guess_report(seq.family_terms("c:-4,2", 250), 6, 8)
        assert report == {
            "r_max": 6,
            "d_max": 8,
            "terms_supplied": 251,
            "found": False,
        }

    def test_found_report_carries_operator(self):
        report = hol.guess_report(seq.family_terms("u7", 60), 3, 4)
        assert report["found"]
        assert "a(n+2)" in report["recurrence"]["operator"]

    def test_terms_file_round_trip(self, tmp_path):
        path = tmp_path / "terms.txt"
        path.write_text("1\n4\n48\n\n760\n")
        assert hol.read_terms_file(path) == [1, 4, 48, 760]
