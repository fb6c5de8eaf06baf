"""Sweep tests: reproduced parameter surveys, determinism, resume."""

import json

import pytest

from selfrep import search
from selfrep.search import SweepSpec


def small_spec(**kw):
    base = dict(shape="alg0", lambda_range=(-4, 4), ell=1, terms=120, prime_bound=13, probe_terms=60)
    base.update(kw)
    return SweepSpec(**base)


class TestSpec:
    def test_pairs_exclude_diagonal(self):
        spec = SweepSpec(shape="alg0", lambda_range=(-2, 2), mu_range=(-2, 2))
        pairs = spec.pairs()
        assert all(l != m for l, m in pairs)
        assert len(pairs) == 25 - 5

    def test_square_constraint(self):
        spec = SweepSpec(shape="alg0", lambda_range=(-3, 3), constraint="lambda2-eq-mu")
        assert spec.pairs() == [(-3, 9), (-2, 4), (-1, 1), (2, 4), (3, 9)]

    def test_validation(self):
        with pytest.raises(ValueError):
            SweepSpec(shape="bogus")
        with pytest.raises(ValueError):
            SweepSpec(terms=10)
        with pytest.raises(ValueError):
            SweepSpec(lambda_range=(3, 1))

    def test_round_trip(self):
        spec = small_spec()
        assert SweepSpec.from_dict(spec.to_json()) == spec


class TestClassify:
    @pytest.mark.parametrize(
        "pair,tag",
        [
            ((2, 4), "level-7"),
            ((-2, 4), "level-3"),
            ((-1, 1), "algebraic"),
            ((4, 16), "level-3-weight-4"),
            ((16, 256), "level-1-weight-8"),
            ((-8, 4), "nonholonomic-suspect"),
            ((-12, 6), "nonholonomic-suspect"),
            ((3, 7), "unknown"),
        ],
    )
    def test_table(self, pair, tag):
        assert search.classify_family(*pair) == tag


class TestSweep:
    def test_square_survey_small(self):
        spec = SweepSpec(
            shape="alg0",
            lambda_range=(-6, 6),
            constraint="lambda2-eq-mu",
            ell=1,
            terms=200,
            prime_bound=20,
        )
        results = search.sweep(spec)
        passing = sorted(l for l, _ in search.passing_pairs(results))
        assert passing == [-2, -1, 2, 4]

    def test_every_pair_reported(self):
        spec = small_spec()
        results = search.sweep(spec)
        assert len(results) == len(spec.pairs())
        assert all("ell_pass" in r for r in results)

    def test_shifted_variant_family_passes_level1(self):
        spec = SweepSpec(shape="variant", ell=1, terms=150, prime_bound=13)
        for alpha in range(-8, 9):
            lam, mu = -alpha - 2, alpha
            if lam == mu:
                continue
            verdict = search.evaluate_pair(spec, lam, mu)
            assert verdict.ell_pass, (lam, mu)

    def test_passing_pairs_repass_in_isolation(self):
        spec = small_spec()
        for lam, mu in search.passing_pairs(search.sweep(spec)):
            assert search.evaluate_pair(spec, lam, mu).ell_pass

    def test_jobs_do_not_change_results(self):
        spec = small_spec(lambda_range=(-3, 3))
        serial = search.sweep(spec, jobs=1)
        parallel = search.sweep(spec, jobs=2)
        assert serial == parallel

    def test_probe_failures_match_full_grid(self):
        # a probe rejection must agree with the full-grid verdict
        spec = small_spec()
        for rec in search.sweep(spec):
            if rec.get("probe_stage"):
                full = search.evaluate_pair(
                    small_spec(probe_terms=spec.terms), rec["lambda"], rec["mu"]
                )
                assert full.ell_pass is False


class TestStreamAndResume:
    def test_jsonl_and_resume(self, tmp_path):
        out = tmp_path / "sweep.jsonl"
        spec = small_spec(lambda_range=(-2, 2))
        first = search.sweep(spec, out_path=out)
        lines = [json.loads(s) for s in out.read_text().splitlines()]
        assert len(lines) == len(spec.pairs())
        # resuming re-reads, computes nothing new, and appends nothing
        before = out.read_text()
        again = search.sweep(spec, out_path=out, resume=True)
        assert out.read_text() == before
        assert again == first

    def test_resume_completes_partial_file(self, tmp_path):
        out = tmp_path / "sweep.jsonl"
        spec = small_spec(lambda_range=(-2, 2))
        full = search.sweep(spec)
        out.write_text(json.dumps(full[0]) + "\n")
        merged = search.sweep(spec, out_path=out, resume=True)
        assert merged == full

    def test_config_files(self, tmp_path):
        spec = small_spec()
        jpath = tmp_path / "spec.json"
        jpath.write_text(json.dumps(spec.to_json()))
        assert search.load_spec(jpath) == spec
        tpath = tmp_path / "spec.toml"
        tpath.write_text(
            'shape = "alg0"\nlambda_range = [-4, 4]\nell = 1\nterms = 120\n'
            "prime_bound = 13\nprobe_terms = 60\n"
        )
        assert search.load_spec(tpath) == spec
