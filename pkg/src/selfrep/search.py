"""Parameter sweeps over (lambda, mu) for both equation shapes.

A sweep computes each pair's coefficient prefix reduced mod one combined
modulus (built from every prime power the requested tests need) and
applies congruence filters.  A cheap probe on a small subgrid runs
first; only pairs that survive it get the full grid.  The probe applies
the same tests the caller asked for, so it can only discard pairs the
full grid would discard anyway.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import congruences as cg
from . import holonomic
from . import sequences


@dataclass(frozen=True)
class SweepSpec:
    """Configuration of one parameter sweep."""

    shape: str = "alg0"  # "alg0" (cubic denominators) or "variant" (quadratic)
    lambda_range: tuple[int, int] = (-10, 10)
    mu_range: tuple[int, int] | None = None
    constraint: str | None = None  # None | lambda2-eq-mu | lambda-eq-minus-2mu
    ell: int | None = 1
    lucas: bool = False
    holonomic_probe: bool = False
    terms: int = 400
    prime_bound: int = 50
    super_min_prime: int = cg.SUPER_MIN_PRIME
    r_max: int = cg.DEFAULT_R_MAX
    probe_terms: int = 100
    probe_primes: tuple[int, ...] = (5, 7)

    def __post_init__(self):
        if self.shape not in ("alg0", "variant"):
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.lambda_range[0] > self.lambda_range[1]:
            raise ValueError("empty lambda range")
        if self.terms < 50:
            raise ValueError("term budget below 50 cannot filter meaningfully")

    def pairs(self) -> list[tuple[int, int]]:
        lo, hi = self.lambda_range
        lams = range(lo, hi + 1)
        if self.constraint == "lambda2-eq-mu":
            pairs = [(lam, lam * lam) for lam in lams]
        elif self.constraint == "lambda-eq-minus-2mu":
            mlo, mhi = self.mu_range or self.lambda_range
            pairs = [(-2 * mu, mu) for mu in range(mlo, mhi + 1)]
        elif self.constraint is None:
            mlo, mhi = self.mu_range or self.lambda_range
            pairs = [(lam, mu) for lam in lams for mu in range(mlo, mhi + 1)]
        else:
            raise ValueError(f"unknown constraint {self.constraint!r}")
        return [(lam, mu) for lam, mu in pairs if lam != mu]

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        kwargs = dict(data)
        for key in ("lambda_range", "mu_range", "probe_primes"):
            if key in kwargs and kwargs[key] is not None:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass
class PairVerdict:
    """Outcome of the requested tests for one (lambda, mu) pair."""

    lam: int
    mu: int
    ell: int | None = None
    ell_pass: bool | None = None
    ell_failure: dict | None = None
    probe_stage: bool = False  # failed already on the probe subgrid
    lucas: dict = field(default_factory=dict)
    holonomic_found: bool | None = None
    family: str = "unknown"

    def to_json(self) -> dict:
        out = {"lambda": self.lam, "mu": self.mu, "family": self.family}
        if self.ell is not None:
            out["ell"] = self.ell
            out["ell_pass"] = self.ell_pass
            if self.ell_failure:
                out["ell_failure"] = self.ell_failure
                out["probe_stage"] = self.probe_stage
        if self.lucas:
            out["lucas"] = self.lucas
        if self.holonomic_found is not None:
            out["holonomic_found"] = self.holonomic_found
        return out


def classify_family(lam: int, mu: int) -> str:
    """Name the known cubic-shape cases; 'unknown' otherwise."""
    table = {
        (2, 4): "level-7",
        (-2, 4): "level-3",
        (-1, 1): "algebraic",
        (4, 16): "level-3-weight-4",
        (16, 256): "level-1-weight-8",
    }
    if (lam, mu) in table:
        return table[(lam, mu)]
    if lam == -2 * mu and mu != 0 and mu % 2 == 0:
        return "nonholonomic-suspect"
    return "unknown"


def _grid_rs(p: int, n_max: int, r_max: int) -> int:
    r = 0
    power = p
    while power <= n_max and r < r_max:
        r += 1
        power *= p
    return r


def _modulus(primes, ell: int, n_max: int, r_max: int, extra_primes=()) -> int:
    m = 1
    for p in primes:
        m *= p ** (ell * _grid_rs(p, n_max, r_max))
    for p in extra_primes:
        if p not in primes:
            m *= p
    return m


def _terms_mod(shape: str, lam: int, mu: int, count: int, mod: int) -> list[int]:
    fn = sequences.c_lambda_mu if shape == "alg0" else sequences.c_variant
    return fn(lam, mu, count, mod=mod)


def evaluate_pair(spec: SweepSpec, lam: int, mu: int) -> PairVerdict:
    """Run the configured tests for one pair (probe first, then full grid)."""
    verdict = PairVerdict(lam=lam, mu=mu, family=classify_family(lam, mu))
    if spec.ell is not None:
        verdict.ell = spec.ell
        min_p = spec.super_min_prime if spec.ell >= 2 else 2
        probe_primes = [p for p in spec.probe_primes if p >= min_p]
        if probe_primes and spec.probe_terms < spec.terms:
            mod = _modulus(probe_primes, spec.ell, spec.probe_terms, spec.r_max)
            terms = _terms_mod(spec.shape, lam, mu, spec.probe_terms, mod)
            for p in probe_primes:
                cx = cg.super_check(terms, p, spec.ell, spec.r_max, spec.probe_terms)
                if cx is not None:
                    verdict.ell_pass = False
                    verdict.ell_failure = {"p": p, **cx.to_json()}
                    verdict.probe_stage = True
                    break
        if verdict.ell_pass is None:
            primes = cg.primes_upto(spec.prime_bound, min_p)
            lucas_extra = cg.primes_upto(spec.prime_bound) if spec.lucas else ()
            mod = _modulus(primes, spec.ell, spec.terms, spec.r_max, lucas_extra)
            terms = _terms_mod(spec.shape, lam, mu, spec.terms, mod)
            verdict.ell_pass = True
            for p in primes:
                cx = cg.super_check(terms, p, spec.ell, spec.r_max, spec.terms)
                if cx is not None:
                    verdict.ell_pass = False
                    verdict.ell_failure = {"p": p, **cx.to_json()}
                    break
            if spec.lucas:
                for p in lucas_extra:
                    cx = cg.lucas_check(terms, p, spec.terms)
                    verdict.lucas[p] = "pass" if cx is None else f"fail@{cx.n}"
    elif spec.lucas:
        primes = cg.primes_upto(spec.prime_bound)
        mod = _modulus((), 1, spec.terms, spec.r_max, primes)
        terms = _terms_mod(spec.shape, lam, mu, spec.terms, mod)
        for p in primes:
            cx = cg.lucas_check(terms, p, spec.terms)
            verdict.lucas[p] = "pass" if cx is None else f"fail@{cx.n}"
    if spec.holonomic_probe:
        n_probe = min(spec.terms, 80)
        fn = sequences.c_lambda_mu if spec.shape == "alg0" else sequences.c_variant
        exact = fn(lam, mu, n_probe)
        verdict.holonomic_found = holonomic.guess(exact, 3, 4) is not None
    return verdict


def _worker(args) -> dict:
    spec_data, lam, mu = args
    spec = SweepSpec.from_dict(spec_data)
    return evaluate_pair(spec, lam, mu).to_json()


def sweep(
    spec: SweepSpec,
    jobs: int = 1,
    out_path=None,
    resume: bool = False,
) -> list[dict]:
    """Evaluate every pair of the spec; returns JSON verdicts sorted by pair.

    With ``out_path`` the verdicts stream to a JSON-lines file; ``resume``
    skips pairs already present there.  Results are deterministic and
    independent of ``jobs``.
    """
    pairs = spec.pairs()
    done: dict[tuple[int, int], dict] = {}
    if resume and out_path is not None:
        try:
            with open(out_path, "r", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        done[(rec["lambda"], rec["mu"])] = rec
        except FileNotFoundError:
            pass
    todo = [pq for pq in pairs if pq not in done]
    fresh: list[dict] = []
    if todo:
        if jobs > 1:
            spec_data = spec.to_json()
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                fresh = list(pool.map(_worker, [(spec_data, l, m) for l, m in todo], chunksize=4))
        else:
            fresh = [evaluate_pair(spec, lam, mu).to_json() for lam, mu in todo]
    if out_path is not None:
        mode = "a" if resume else "w"
        with open(out_path, mode, encoding="utf-8") as fh:
            for rec in fresh:
                fh.write(json.dumps(rec) + "\n")
    merged = {**done, **{(r["lambda"], r["mu"]): r for r in fresh}}
    return [merged[pq] for pq in sorted(merged) if pq in set(pairs) | set(done)]


def passing_pairs(results: list[dict]) -> list[tuple[int, int]]:
    """Pairs whose requested level test passed on the full grid."""
    return [(r["lambda"], r["mu"]) for r in results if r.get("ell_pass")]


def load_spec(path) -> SweepSpec:
    """Read a SweepSpec from a JSON or TOML config file."""
    text = open(path, "rb").read()
    name = str(path)
    if name.endswith(".toml"):
        try:
            import tomllib as toml
        except ImportError:
            import tomli as toml
        data = toml.loads(text.decode("utf-8"))
    else:
        data = json.loads(text.decode("utf-8"))
    return SweepSpec.from_dict(data)
