"""Monotone Hurwitz numbers and the exponential-plus-linear model.

A tuple of transpositions ((a_1 b_1), ..., (a_m b_m)), a_i < b_i, is monotone
when b_1 <= ... <= b_m.  For fixed mu the numbers appear to satisfy

    H(k) = C0 * k + sum_{m=1}^{d-1} C(m) * m^k,   k = d + 2g - 2 + n.

Two normalisations are exposed.  "definition" is |Aut(mu)|/d! times the
transitive class count; "fixed-target" counts transitive tuples whose product
is one fixed permutation of type mu.  They differ by the factor mu_1...mu_n,
and the reference models in data/table3.json use the fixed-target one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import factorial, prod
from typing import Dict, List, Optional, Sequence, Tuple

from . import oracle
from .exactalg import format_rational, parse_rational

NORMALISATIONS = ("fixed-target", "definition")


class SingularSystem(ArithmeticError):
    pass


def _canon(mu: Sequence[int]) -> Tuple[int, ...]:
    mu = tuple(sorted((int(x) for x in mu), reverse=True))
    if not mu or any(x <= 0 for x in mu):
        raise ValueError(f"mu must be a non-empty tuple of positive integers, got {mu}")
    return mu


def k_of(mu: Sequence[int], g: int) -> int:
    return sum(mu) + 2 * g - 2 + len(mu)


def monotone_hurwitz(mu: Sequence[int], g: int, normalisation: str = "fixed-target") -> Fraction:
    mu = _canon(mu)
    if normalisation not in NORMALISATIONS:
        raise ValueError(f"normalisation must be one of {NORMALISATIONS}")
    k = k_of(mu, g)
    if k < 0:
        return Fraction(0)
    fixed = oracle.monotone_connected_fixed(mu, k)
    if normalisation == "fixed-target":
        return Fraction(fixed)
    return Fraction(fixed, prod(mu))


def definition_value(mu: Sequence[int], g: int) -> Fraction:
    """Value under the definition, straight from the class count: |Aut(mu)|/d! * #transitive monotone tuples."""
    mu = _canon(mu)
    d = sum(mu)
    count = oracle.monotone_count(d, mu, k_of(mu, g), fixed_target=False, transitive=True)
    aut = prod(factorial(mu.count(x)) for x in set(mu))
    return Fraction(count * aut, factorial(d))


@dataclass
class MonotoneModel:
    mu: Tuple[int, ...]
    C: Dict[int, Fraction]
    C0: Fraction = Fraction(0)
    normalisation: str = "fixed-target"

    def __call__(self, k: int) -> Fraction:
        return self.C0 * k + sum((c * m**k for m, c in self.C.items()), Fraction(0))

    def value(self, g: int) -> Fraction:
        return self(k_of(self.mu, g))

    def same_as(self, other: "MonotoneModel") -> bool:
        keys = set(self.C) | set(other.C)
        return self.C0 == other.C0 and all(
            self.C.get(m, 0) == other.C.get(m, 0) for m in keys
        )

    def pretty(self) -> str:
        parts = []
        for m in sorted(self.C, reverse=True):
            c = self.C[m]
            if c:
                parts.append(f"{format_rational(c)}*{m}^k")
        if self.C0:
            parts.append(f"{format_rational(self.C0)}*k")
        return " + ".join(parts).replace("+ -", "- ") or "0"

    def to_json(self) -> dict:
        return {
            "C0": format_rational(self.C0),
            "C": {str(m): format_rational(c) for m, c in sorted(self.C.items(), reverse=True)},
        }


def _solve(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    # Gauss-Jordan over Q; the systems are at most 6x6
    n = len(matrix)
    a = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularSystem(f"no pivot in column {col}; are the k values distinct?")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def fit_exp_linear(values: Sequence[Tuple[int, Fraction]], d: int,
                   mu: Optional[Sequence[int]] = None, normalisation: str = "fixed-target") -> MonotoneModel:
    """Exact fit of C0*k + sum_{m=1}^{d-1} C(m) m^k to the first d points."""
    if d < 2:
        raise ValueError("need d >= 2")
    pts = list(values)[:d]
    if len(pts) < d:
        raise ValueError(f"need {d} points, got {len(pts)}")
    ks = [k for k, _ in pts]
    if len(set(ks)) < d:
        raise SingularSystem(f"duplicate k values in {ks}")
    matrix = [[Fraction(k)] + [Fraction(m) ** k for m in range(1, d)] for k in ks]
    sol = _solve(matrix, [Fraction(v) for _, v in pts])
    C = {m: sol[m] for m in range(1, d)}
    return MonotoneModel(tuple(mu) if mu else (), C, sol[0], normalisation)


@dataclass
class ConjectureReport:
    mu: Tuple[int, ...]
    normalisation: str
    model: MonotoneModel
    fitted_g: List[int]
    validated_g: List[int]
    failures: List[int] = field(default_factory=list)
    bridge_ok: bool = True

    @property
    def all_pass(self) -> bool:
        return not self.failures and self.bridge_ok

    def to_json(self) -> dict:
        return {
            "mu": list(self.mu),
            "normalisation": self.normalisation,
            "model": self.model.to_json(),
            "validated_g": self.validated_g,
            "all_pass": self.all_pass,
        }


def verify_conjecture(mu: Sequence[int], g_max: int, normalisation: str = "fixed-target",
                      check_bridge: bool = False) -> ConjectureReport:
    """Fit on the lowest-genus points, then check every g up to g_max exactly."""
    mu = _canon(mu)
    d = sum(mu)
    if d < 2:
        raise ValueError("the model needs |mu| >= 2")
    gs = list(range(g_max + 1))
    if len(gs) < d:
        raise ValueError(f"g_max={g_max} gives fewer than {d} points")
    vals = {g: monotone_hurwitz(mu, g, normalisation) for g in gs}
    model = fit_exp_linear([(k_of(mu, g), vals[g]) for g in gs[:d]], d, mu, normalisation)
    rest = gs[d:]
    failures = [g for g in gs if model.value(g) != vals[g]]
    bridge = True
    if check_bridge:
        for g in gs:
            fixed = vals[g] if normalisation == "fixed-target" else monotone_hurwitz(mu, g)
            bridge &= fixed == prod(mu) * definition_value(mu, g)
    return ConjectureReport(mu, normalisation, model, gs[:d], rest, failures, bridge)


def golden_table3() -> Dict[Tuple[int, ...], MonotoneModel]:
    raw = json.loads(resources.files("hurwitz_wedge").joinpath("data/table3.json").read_text())
    out = {}
    for key, row in raw["rows"].items():
        mu = tuple(int(c) for c in key)
        C = {int(m): Fraction(parse_rational(c)) for m, c in row["C"].items()}
        out[mu] = MonotoneModel(mu, C, Fraction(parse_rational(row["C0"])))
    return out
