"""Named exact integer sequence families with independent computation routes.

Each family can be produced at least two ways (binomial sum, three-term
recurrence, coefficient recursion of its functional equation, closed
form); the test suite asserts the routes agree term by term.  Prefixes
are computed whole (0..N) and memoised per process, since congruence
scans re-read them heavily.

The u-sequence (level 7): 1, 4, 48, 760, 13840, ... with
u_n = sum_k C(n,k)^2 C(n+k,n) C(2k,n), satisfying
(n+1)^3 u_{n+1} = (2n+1)(13n^2+13n+4) u_n + 3n(3n-1)(3n+1) u_{n-1}.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import comb

import gmpy2

from .exact import binom

_MPZ = gmpy2.mpz


class UnknownFamily(KeyError):
    """Requested sequence family id is not registered."""


class InexactDivision(ArithmeticError):
    """A recurrence step required a non-integer division (transcription bug)."""


@dataclass(frozen=True)
class NotSplittable:
    """Result value when a sequence has no integral convolution square root."""

    first_bad_index: int


def _peval(coeffs, n):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class AperyRecurrence:
    """Three-term recurrence lead(n) a_{n+1} = mid(n) a_n + trail(n) a_{n-1}.

    Polynomial coefficients ascending in n.  Every division by lead(n)
    must be exact over the integers; a remainder is a hard error, never a
    rounding.
    """

    lead: tuple[int, ...]
    mid: tuple[int, ...]
    trail: tuple[int, ...]
    initial: tuple[int, ...] = (1,)

    def terms(self, count: int) -> list[int]:
        """Terms 0..count (inclusive)."""
        if count < 0:
            raise ValueError("count must be >= 0")
        a = [_MPZ(v) for v in self.initial]
        for n in range(len(a) - 1, count):
            rhs = _peval(self.mid, n) * a[n]
            if n > 0:
                rhs += _peval(self.trail, n) * a[n - 1]
            lead = _peval(self.lead, n)
            q, r = divmod(rhs, lead)
            if r:
                raise InexactDivision(f"step n={n}: {rhs} not divisible by {lead}")
            a.append(q)
        return [int(v) for v in a[: count + 1]]


# (n+1)^3 a_{n+1} = (2n+1)(13n^2+13n+4) a_n + 3n(3n-1)(3n+1) a_{n-1}
U7_RECURRENCE = AperyRecurrence(
    lead=(1, 3, 3, 1),
    mid=(4, 21, 39, 26),
    trail=(0, -3, 0, 27),
    initial=(1,),
)


def u_binomial(n: int) -> int:
    """u_n as sum_k C(n,k)^2 C(n+k,n) C(2k,n)."""
    if n < 0:
        raise ValueError("index must be >= 0")
    return sum(binom(n, k) ** 2 * binom(n + k, n) * binom(2 * k, n) for k in range(n + 1))


def u_binomial_alt(n: int) -> int:
    """u_n in its alternating form sum_k (-1)^(n-k) C(3n+1,n-k) C(n+k,n)^3."""
    if n < 0:
        raise ValueError("index must be >= 0")
    total = 0
    for k in range(n + 1):
        term = binom(3 * n + 1, n - k) * binom(n + k, n) ** 3
        total += -term if (n - k) & 1 else term
    return total


def u_recurrence(count: int) -> list[int]:
    """Terms u_0..u_count via the three-term recurrence."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return U7_RECURRENCE.terms(count)


# ---------------------------------------------------------------------------
# Coefficient recursions for the two parametric equation shapes.
#
# Cubic-denominator shape (prefactors 1/(1+mu z)^2, 1/(1+lambda z)^2, maps
# z/(1+mu z)^3 and z^2/(1+lambda z)^3):
#   c_n = sum_{k<=n/2} C(n+k+1,3k+1) (-lam)^(n-2k) c_k
#       - sum_{k<n}    C(n+2k+1,3k+1) (-mu)^(n-k)  c_k
# Quadratic-denominator variant (prefactors 1/(1+mu z), 1/(1+lambda z),
# maps z/(1+mu z)^2 and z^2/(1+lambda z)^2):
#   c_n = sum_{k<=n/2} C(n,n-2k) (-lam)^(n-2k) c_k
#       - sum_{k<n}    C(n+k,n-k) (-mu)^(n-k)  c_k
# Both expand the corresponding functional equation with the binomial
# theorem and peel the top coefficient; the equation solver cross-checks
# them in the tests.
# ---------------------------------------------------------------------------

_TABLE_LIMIT = 640
_tables_lock = threading.Lock()
_TABLES: dict = {}
_REDUCED_TABLES: dict = {}


def _shape_tables(shape: str, n_max: int, mod: int | None = None):
    """Rows of binomial coefficients shared by every (lambda, mu) pair."""
    if n_max > _TABLE_LIMIT:
        raise ValueError(
            f"coefficient recursions support N <= {_TABLE_LIMIT}; "
            "large prefixes come from the closed-form families"
        )
    with _tables_lock:
        rows1, rows2 = _TABLES.setdefault(shape, ([], []))
        for n in range(len(rows1), n_max + 1):
            if shape == "alg0":
                rows1.append([comb(n + k + 1, 3 * k + 1) for k in range(n // 2 + 1)])
                rows2.append([comb(n + 2 * k + 1, 3 * k + 1) for k in range(n)])
            elif shape == "variant":
                rows1.append([comb(n, n - 2 * k) for k in range(n // 2 + 1)])
                rows2.append([comb(n + k, n - k) for k in range(n)])
            else:
                raise ValueError(f"unknown shape {shape!r}")
        if mod is None:
            return rows1, rows2
        red1, red2 = _REDUCED_TABLES.setdefault((shape, mod), ([], []))
        for n in range(len(red1), n_max + 1):
            red1.append([v % mod for v in rows1[n]])
            red2.append([v % mod for v in rows2[n]])
        return red1, red2


def _shape_recursion(shape: str, lam: int, mu: int, count: int, mod: int | None) -> list[int]:
    rows1, rows2 = _shape_tables(shape, count, mod)
    neg_lam, neg_mu = -lam, -mu
    pow_l = [1] * (count + 1)
    pow_m = [1] * (count + 1)
    for j in range(1, count + 1):
        pow_l[j] = pow_l[j - 1] * neg_lam
        pow_m[j] = pow_m[j - 1] * neg_mu
        if mod is not None:
            pow_l[j] %= mod
            pow_m[j] %= mod
    c: list = [_MPZ(1)]
    for n in range(1, count + 1):
        acc = 0
        r1 = rows1[n]
        for k in range(n // 2 + 1):
            acc += r1[k] * pow_l[n - 2 * k] * c[k]
        r2 = rows2[n]
        for k in range(n):
            acc -= r2[k] * pow_m[n - k] * c[k]
        c.append(acc % mod if mod is not None else acc)
    return [int(v) for v in c]


def c_lambda_mu(lam: int, mu: int, count: int, mod: int | None = None) -> list[int]:
    """Terms 0..count of the cubic-shape coefficient recursion.

    Always integral for integer parameters.  ``mod`` computes the prefix
    reduced mod a positive integer (fast path for congruence scans).
    """
    return _shape_recursion("alg0", lam, mu, count, mod)


def c_variant(lam: int, mu: int, count: int, mod: int | None = None) -> list[int]:
    """Terms 0..count of the quadratic-variant coefficient recursion."""
    return _shape_recursion("variant", lam, mu, count, mod)


# ---------------------------------------------------------------------------
# Closed-form kernels (all inner sequences are positive, which the
# Kronecker-substitution squaring relies on).
# ---------------------------------------------------------------------------


def _ratio_sequence(count: int, num_factors, den_factors) -> list:
    """Build a_0=1, a_n = a_{n-1} * prod(num(n)) / prod(den(n)), exactly."""
    a = [_MPZ(1)]
    for n in range(1, count + 1):
        val = a[-1]
        for f in num_factors(n):
            val = val * f
        den = 1
        for g in den_factors(n):
            den *= g
        val, r = divmod(val, den)
        if r:
            raise InexactDivision(f"ratio step {n}")
        a.append(val)
    return a


def _central(count):  # C(2n,n)
    return _ratio_sequence(count, lambda n: (2 * (2 * n - 1),), lambda n: (n,))


def _c3n(count):  # C(3n,n)
    return _ratio_sequence(
        count, lambda n: (3 * n, 3 * n - 1, 3 * n - 2), lambda n: (n, 2 * n, 2 * n - 1)
    )


def _c42(count):  # C(4n,2n)
    return _ratio_sequence(
        count,
        lambda n: (4 * n, 4 * n - 1, 4 * n - 2, 4 * n - 3),
        lambda n: (2 * n, 2 * n - 1, 2 * n, 2 * n - 1),
    )


def _c63(count):  # C(6n,3n)
    return _ratio_sequence(
        count,
        lambda n: tuple(6 * n - i for i in range(6)),
        lambda n: (3 * n, 3 * n - 1, 3 * n - 2, 3 * n, 3 * n - 1, 3 * n - 2),
    )


def conv_square_nonneg(a: list) -> list:
    """Convolution square of a nonnegative integer sequence.

    Packs the sequence into one big integer (Kronecker substitution) so
    GMP's subquadratic multiplication does the convolution; returns the
    first len(a) coefficients.
    """
    n = len(a)
    vals = [_MPZ(v) for v in a]
    if any(v < 0 for v in vals):
        raise ValueError("Kronecker squaring needs nonnegative entries")
    if n <= 48:
        return [sum(vals[i] * vals[k - i] for i in range(k + 1)) for k in range(n)]
    max_bits = max(v.bit_length() for v in vals)
    stride = 2 * max_bits + n.bit_length() + 1
    stride += (-stride) % 4  # whole hex digits
    width = stride // 4
    packed = gmpy2.mpz("".join(v.digits(16).zfill(width) for v in reversed(vals)), 16)
    square = packed * packed
    hexstr = square.digits(16)
    out = []
    for k in range(n):
        hi = len(hexstr) - k * width
        if hi <= 0:
            out.append(_MPZ(0))
            continue
        chunk = hexstr[max(0, hi - width) : hi]
        out.append(_MPZ(chunk, 16))
    return out


def _row_sum_family(count: int, kind: str) -> list:
    """sum_k C(n,k)^2 C(2k,k) / C(n,k)^3 / C(n,k)^2 C(n+k,k), rows built incrementally."""
    central = _central(count) if kind == "gb" else None
    out = []
    for n in range(count + 1):
        cnk = _MPZ(1)
        cnpk = _MPZ(1)  # C(n+k,k), updated along k
        total = _MPZ(0)
        for k in range(n + 1):
            if kind == "gb":
                total += cnk * cnk * central[k]
            elif kind == "gc":
                total += cnk * cnk * cnk
            else:  # apery2: C(n,k)^2 C(n+k,k)
                total += cnk * cnk * cnpk
            if k < n:
                cnk = cnk * (n - k) // (k + 1)
                cnpk = cnpk * (n + k + 1) // (k + 1)
        out.append(total)
    return out


def _compute_family(fid: str, count: int) -> list[int]:
    n1 = count + 1
    if fid == "u7":
        return u_recurrence(max(count, 1))[:n1]
    if fid == "f2":
        b2, b42 = _central(count), _c42(count)
        return [int(v) for v in conv_square_nonneg([x * y for x, y in zip(b2, b42)])]
    if fid == "f3":
        b2, b3 = _central(count), _c3n(count)
        return [int(v) for v in conv_square_nonneg([x * y for x, y in zip(b2, b3)])]
    if fid == "f4":
        b2 = _central(count)
        return [int(v) for v in conv_square_nonneg([x * x for x in b2])]
    if fid == "f5":
        b2 = _central(count)
        apery2 = _row_sum_family(count, "apery2")
        return [int(x * y) for x, y in zip(b2, apery2)]
    if fid == "fhat2":
        b2, b42 = _central(count), _c42(count)
        return [int(x * x * y) for x, y in zip(b2, b42)]
    if fid == "fhat3":
        b2, b3 = _central(count), _c3n(count)
        return [int(x * x * y) for x, y in zip(b2, b3)]
    if fid == "fhat4":
        b2 = _central(count)
        return [int(x ** 3) for x in b2]
    if fid == "fhat5":
        out = []
        for n in range(count + 1):
            total = 0
            for k in range(n + 1):
                term = binom(n, k) ** 3 * binom(4 * n - 5 * k, 3 * n)
                total += -term if (n - k) & 1 else term
            out.append(total)
        return out
    if fid == "gb":
        return [int(v) for v in _row_sum_family(count, "gb")]
    if fid == "gc":
        return [int(v) for v in _row_sum_family(count, "gc")]
    if fid == "g5":
        return [int(v) for v in _row_sum_family(count, "apery2")]
    raise UnknownFamily(fid)


FAMILY_IDS = ("u7", "f2", "f3", "f4", "f5", "fhat2", "fhat3", "fhat4", "fhat5", "gb", "gc", "g5")


def _cubic_pair_terms(lam: int, mu: int, count: int) -> list[int]:
    """Cubic-shape terms, using closed forms for the identified pairs."""
    if (lam, mu) == (2, 4):
        return _compute_family("u7", count)
    if (lam, mu) == (-2, 4):
        return _compute_family("f3", count)
    if (lam, mu) == (-1, 1):  # 2^n C(2n,n)
        return [int(v << n) for n, v in enumerate(_central(count))]
    if (lam, mu) == (4, 16):
        fhat3 = [_MPZ(v) for v in _compute_family("fhat3", count)]
        return [int(v) for v in conv_square_nonneg(fhat3)]
    if (lam, mu) == (16, 256):
        b2, b3, b63 = _central(count), _c3n(count), _c63(count)
        inner = [x * y * z for x, y, z in zip(b2, b3, b63)]
        return [int(v) for v in conv_square_nonneg(conv_square_nonneg(inner))]
    return c_lambda_mu(lam, mu, count)


def _variant_pair_terms(lam: int, mu: int, count: int) -> list[int]:
    """Variant-shape terms, using closed forms for the identified pairs."""
    if (lam, mu) == (0, 4):  # C(2n,n)^2, termwise
        return [int(v * v) for v in _central(count)]
    if (lam, mu) == (-8, 16):
        return _compute_family("f2", count)
    if lam == -mu - 2:  # (mu+1)^n C(2n,n)
        base = mu + 1
        out, power = [], 1
        for n, v in enumerate(_central(count)):
            out.append(int(v * power))
            power *= base
        return out
    return c_variant(lam, mu, count)

_cache_lock = threading.Lock()
_PREFIX_CACHE: dict[str, list[int]] = {}


def parse_family_id(fid: str):
    """Split a family tag into ('named', id) or ('c'|'cvar', lam, mu)."""
    if fid in FAMILY_IDS:
        return ("named", fid)
    for prefix, kind in (("c:", "c"), ("cvar:", "cvar")):
        if fid.startswith(prefix):
            try:
                lam_s, mu_s = fid[len(prefix) :].split(",")
                return (kind, int(lam_s), int(mu_s))
            except ValueError as exc:
                raise UnknownFamily(fid) from exc
    raise UnknownFamily(fid)


def family_terms(fid: str, count: int) -> list[int]:
    """Exact terms 0..count of a named family or c:lam,mu / cvar:lam,mu tag."""
    if count < 0:
        raise ValueError("count must be >= 0")
    parsed = parse_family_id(fid)
    with _cache_lock:
        cached = _PREFIX_CACHE.get(fid)
        if cached is not None and len(cached) > count:
            return cached[: count + 1]
    if parsed[0] == "named":
        terms = _compute_family(parsed[1], count)
    elif parsed[0] == "c":
        terms = _cubic_pair_terms(parsed[1], parsed[2], count)
    else:
        terms = _variant_pair_terms(parsed[1], parsed[2], count)
    with _cache_lock:
        old = _PREFIX_CACHE.get(fid)
        if old is None or len(old) <= count:
            _PREFIX_CACHE[fid] = terms
    return list(terms)


def clear_cache():
    with _cache_lock:
        _PREFIX_CACHE.clear()


def convolution_split(c: list[int]):
    """Find d with sum_k d_k d_{n-k} = c_n, or report the first failure.

    Requires c_0 = 1.  Returns the integer list d, or a NotSplittable
    value carrying the first index where d would be a half-integer.
    """
    if not c or c[0] != 1:
        raise ValueError("splitting needs c_0 = 1")
    d = [1]
    for n in range(1, len(c)):
        acc = c[n] - sum(d[k] * d[n - k] for k in range(1, n))
        if acc & 1:
            return NotSplittable(first_bad_index=n)
        d.append(acc // 2)
    return d


def format_terms(terms: list[int], fmt: str = "lines") -> str:
    """Serialize terms: one decimal per line, or a JSON array of strings."""
    if fmt == "lines":
        return "\n".join(str(t) for t in terms) + "\n"
    if fmt == "json":
        import json

        return json.dumps([str(t) for t in terms])
    raise ValueError(f"unknown format {fmt!r}")
