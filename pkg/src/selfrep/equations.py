"""Generic solver and verifier for self-replicating functional equations.

An equation couples a series f at a degree-1 rational argument with f at
a degree-m argument (m >= 2):

    t_left(z) * f(phi_left(z)) = t_right(z) * f(phi_right(z)),

with t_left(0) = t_right(0) = 1, phi_left = z + O(z^2) and phi_right of
valuation m.  Together with f(0) = 1 this pins down every Taylor
coefficient of f: at order n the left side contributes c_n with
coefficient 1 while everything else is already known, so the solver
peels coefficients forward without ever inverting a series in f.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exact import norm
from .powerseries import RationalFunction, TruncatedSeries, poly_mul, poly_pow


class InvalidEquation(ValueError):
    """Equation data violates the shape invariants."""


class InconsistentEquation(ArithmeticError):
    """No solution exists at some order (signals malformed input)."""


@dataclass(frozen=True)
class FunctionalEquation:
    t_left: RationalFunction
    phi_left: RationalFunction
    t_right: RationalFunction
    phi_right: RationalFunction

    def __post_init__(self):
        for tag, t in (("t_left", self.t_left), ("t_right", self.t_right)):
            if t.den[0] == 0 or Fraction(t.num[0], t.den[0]) != 1:
                raise InvalidEquation(f"{tag} must equal 1 at z=0")
        left = self.phi_left.expand(1)
        if left[0] != 0 or left[1] != 1:
            raise InvalidEquation("phi_left must expand as z + O(z^2)")
        try:
            m = self.phi_right.valuation()
        except ValueError as exc:
            raise InvalidEquation("phi_right is identically zero") from exc
        if self.phi_right.den[0] == 0:
            raise InvalidEquation("phi_right must be regular at 0")
        if m < 2:
            raise InvalidEquation("phi_right must have valuation >= 2")

    @property
    def order(self) -> int:
        """Replication order m = valuation of the slow-side map."""
        return self.phi_right.valuation()

    def to_json(self) -> dict:
        return {
            "m": self.order,
            "t_left": self.t_left.to_json(),
            "phi_left": self.phi_left.to_json(),
            "t_right": self.t_right.to_json(),
            "phi_right": self.phi_right.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FunctionalEquation":
        eq = cls(
            t_left=RationalFunction.from_json(data["t_left"]),
            phi_left=RationalFunction.from_json(data["phi_left"]),
            t_right=RationalFunction.from_json(data["t_right"]),
            phi_right=RationalFunction.from_json(data["phi_right"]),
        )
        if "m" in data and int(data["m"]) != eq.order:
            raise InvalidEquation(
                f"declared replication order {data['m']} != actual {eq.order}"
            )
        return eq


def load_equation(path) -> FunctionalEquation:
    with open(path, "r", encoding="utf-8") as fh:
        return FunctionalEquation.from_json(json.load(fh))


def _shifted_product(row, val, phi, n_max):
    """row * phi for a row of valuation val; phi[0] = 0.  Result valuation val+1."""
    out = [0] * (n_max + 1)
    for j in range(val + 1, n_max + 1):
        acc = 0
        for i in range(val, j):
            ri = row[i]
            if ri:
                acc += ri * phi[j - i]
        out[j] = acc
    return out


def solve(eq: FunctionalEquation, n_max: int) -> TruncatedSeries:
    """The unique series f with f(0)=1 satisfying eq through order n_max."""
    if n_max < 0:
        raise ValueError("order must be >= 0")
    m = eq.order
    tl = list(eq.t_left.expand(n_max).coeffs)
    tr = list(eq.t_right.expand(n_max).coeffs)
    phil = list(eq.phi_left.expand(n_max).coeffs)
    phir = list(eq.phi_right.expand(n_max).coeffs)

    left_row, right_row = tl, tr
    left_sum = list(tl)
    right_sum = list(tr)
    coeffs: list = [1]
    for n in range(1, n_max + 1):
        left_row = _shifted_product(left_row, n - 1, phil, n_max)
        if m * n <= n_max:
            right_row = _shifted_product(right_row, m * (n - 1), phir, n_max)
        lead = left_row[n]
        if lead == 0:
            raise InconsistentEquation(f"no c_{n} term on the fast side")
        cn = right_sum[n] - left_sum[n]
        if lead != 1:
            cn = norm(Fraction(cn) / Fraction(lead))
        coeffs.append(cn)
        if cn:
            for j in range(n, n_max + 1):
                if left_row[j]:
                    left_sum[j] += cn * left_row[j]
            if m * n <= n_max:
                for j in range(m * n, n_max + 1):
                    if right_row[j]:
                        right_sum[j] += cn * right_row[j]
    return TruncatedSeries(coeffs)


def _sides(eq: FunctionalEquation, f: TruncatedSeries, n_max: int):
    n = min(n_max, f.order)
    ft = f.truncate(n)
    left = ft.compose(eq.phi_left.expand(n)) * eq.t_left.expand(n)
    right = ft.compose(eq.phi_right.expand(n)) * eq.t_right.expand(n)
    return left, right, n


def _agreement_order(a: TruncatedSeries, b: TruncatedSeries, n: int) -> int:
    for k in range(n + 1):
        if a[k] != b[k]:
            return k - 1
    return n


def verify(eq: FunctionalEquation, f: TruncatedSeries, n_max: int) -> int:
    """Largest order through which both sides of eq agree for the given f.

    Returns n_max on success, -1 when even the constant terms differ.
    The series f must carry at least n_max coefficients; extra orders are
    ignored.
    """
    left, right, n = _sides(eq, f, n_max)
    return _agreement_order(left, right, n)


def differentiated_identity(
    eq: FunctionalEquation, f: TruncatedSeries, a, b, n_max: int
) -> int:
    """Verified order of the (a + b*n)-weighted identity derived from eq.

    Weighting the n-th coefficient by a + b*n on both sides is the same
    as applying a*Id + b*(z d/dz) to the composed series, which is how
    the differentiated companion identities arise.  With (a, b) = (1, 0)
    this reduces to plain verification.
    """
    left, right, n = _sides(eq, f, n_max)
    s_left = a * left + b * left.x_derivative()
    s_right = a * right + b * right.x_derivative()
    return _agreement_order(s_left, s_right, n)


# ---------------------------------------------------------------------------
# Named equation registry.
# ---------------------------------------------------------------------------


def _rf(num, den=(1,)) -> RationalFunction:
    return RationalFunction(num, den)


def cubic_shape(lam: int, mu: int) -> FunctionalEquation:
    """1/(1+mu z)^2 f(z/(1+mu z)^3) = 1/(1+lam z)^2 f(z^2/(1+lam z)^3)."""
    pm, pl = (1, mu), (1, lam)
    return FunctionalEquation(
        t_left=_rf((1,), poly_pow(pm, 2)),
        phi_left=_rf((0, 1), poly_pow(pm, 3)),
        t_right=_rf((1,), poly_pow(pl, 2)),
        phi_right=_rf((0, 0, 1), poly_pow(pl, 3)),
    )


def variant_shape(lam: int, mu: int) -> FunctionalEquation:
    """1/(1+mu z) f(z/(1+mu z)^2) = 1/(1+lam z) f(z^2/(1+lam z)^2)."""
    pm, pl = (1, mu), (1, lam)
    return FunctionalEquation(
        t_left=_rf((1,), pm),
        phi_left=_rf((0, 1), poly_pow(pm, 2)),
        t_right=_rf((1,), pl),
        phi_right=_rf((0, 0, 1), poly_pow(pl, 2)),
    )


def _build_registry() -> dict:
    one_minus_z = (1, -1)
    entries = {
        "f7": (cubic_shape(2, 4), "u7"),
        "alg0": (cubic_shape(-4, 2), "c:-4,2"),
        "variant": (variant_shape(2, 0), "cvar:2,0"),
        "f2": (variant_shape(-8, 16), "f2"),
        "f3": (cubic_shape(-2, 4), "f3"),
        "f4": (
            FunctionalEquation(
                t_left=_rf((1,), poly_pow((1, 4), 2)),
                phi_left=_rf((0, 1), poly_pow((1, 4), 2)),
                t_right=_rf((1,)),
                phi_right=_rf((0, 0, 1)),
            ),
            "f4",
        ),
        "f5": (
            FunctionalEquation(
                t_left=_rf((1,), (1, 8)),
                phi_left=_rf((0, 1), poly_mul((1, 4), poly_pow((1, 8), 2))),
                t_right=_rf((1,), (1, 2)),
                phi_right=_rf((0, 0, 1), poly_mul((1, 4), poly_pow((1, 2), 2))),
            ),
            "f5",
        ),
        "fhat2": (
            FunctionalEquation(
                t_left=_rf((1,), (1, 27)),
                phi_left=_rf((0, 1), poly_pow((1, 27), 4)),
                t_right=_rf((1,), (1, 3)),
                phi_right=_rf((0, 0, 0, 1), poly_pow((1, 3), 4)),
            ),
            "fhat2",
        ),
        "fhat4c": (
            FunctionalEquation(
                t_left=_rf((1,), (1, 8)),
                phi_left=_rf(poly_mul((0, 1), poly_pow(one_minus_z, 3)), poly_pow((1, 8), 3)),
                t_right=_rf((1,)),
                phi_right=_rf(poly_mul((0, 0, 0, 1), one_minus_z), (1, 8)),
            ),
            "fhat4",
        ),
        "fhat4q": (
            FunctionalEquation(
                t_left=_rf((1,), poly_pow((1, 4), 2)),
                phi_left=_rf(poly_mul((0, 1), poly_pow(one_minus_z, 5)), poly_pow((1, 4), 5)),
                t_right=_rf((1,)),
                phi_right=_rf(poly_mul((0, 0, 0, 0, 0, 1), one_minus_z), (1, 4)),
            ),
            "fhat4",
        ),
        "fhat5": (
            FunctionalEquation(
                t_left=_rf((1,), (1, -5)),
                phi_left=_rf(poly_mul((0, 1), poly_pow(one_minus_z, 2)), poly_pow((1, -5), 2)),
                t_right=_rf((1,)),
                phi_right=_rf(poly_mul((0, 0, 1), one_minus_z), (1, -5)),
            ),
            "fhat5",
        ),
        "gb": (
            FunctionalEquation(
                t_left=_rf((1,), (1, 3)),
                phi_left=_rf((0, 1, -1), (1, 3)),
                t_right=_rf((1,)),
                phi_right=_rf((0, 0, 1)),
            ),
            "gb",
        ),
        "gc": (
            FunctionalEquation(
                t_left=_rf((1,), (1, 2, 4)),
                phi_left=_rf(poly_mul((0, 1), (1, -1, 1)), (1, 2, 4)),
                t_right=_rf((1,)),
                phi_right=_rf((0, 0, 0, 1)),
            ),
            "gc",
        ),
        "g5": (
            FunctionalEquation(
                t_left=_rf((1,), (1, 3, 4, 2, 1)),
                phi_left=_rf(poly_mul((0, 1), (1, -2, 4, -3, 1)), (1, 3, 4, 2, 1)),
                t_right=_rf((1,)),
                phi_right=_rf((0, 0, 0, 0, 0, 1)),
            ),
            "g5",
        ),
    }
    return entries


_REGISTRY = _build_registry()

REGISTRY_IDS = tuple(_REGISTRY)


def registry_ids() -> tuple[str, ...]:
    return REGISTRY_IDS


def get_equation(eq_id: str) -> FunctionalEquation:
    """Look up a registry id; 'alg0:l,m' and 'variant:l,m' take parameters."""
    if eq_id in _REGISTRY:
        return _REGISTRY[eq_id][0]
    for prefix, builder in (("alg0:", cubic_shape), ("variant:", variant_shape)):
        if eq_id.startswith(prefix):
            try:
                lam_s, mu_s = eq_id[len(prefix) :].split(",")
                return builder(int(lam_s), int(mu_s))
            except ValueError as exc:
                raise KeyError(eq_id) from exc
    raise KeyError(eq_id)


def expected_family(eq_id: str) -> str | None:
    """Family tag whose terms the registry equation's solution must match."""
    entry = _REGISTRY.get(eq_id)
    return entry[1] if entry else None
