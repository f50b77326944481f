"""Hurwitz numbers as linear combinations of exponentials.

For fixed mu (and orbifold parameter r, r = 1 being ordinary Hurwitz numbers)

    H^{[r]}_{g;mu} = 2 / (r^{d/r} (d/r)! mu_1...mu_n) * sum_m C(mu, m) m^k,
    k = d/r + 2g - 2 + n,

where C(mu, m) is read off the expanded connected correlator of
E_r(r hbar)^{d/r} E_{-mu_1}(0) ... E_{-mu_n}(0).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .correlator import CorrelatorResult, OperatorWord, connected, disconnected
from .exactalg import ExpCombo, LaurentPoly, hbar_coeff, to_exp_combo


class InvalidQuery(ValueError):
    pass


class NonIntegerCoefficient(ArithmeticError):
    pass


class ConsistencyFailure(AssertionError):
    pass


def canonical_mu(mu: Sequence[int]) -> Tuple[int, ...]:
    mu = tuple(int(x) for x in mu)
    if not mu or any(x <= 0 for x in mu):
        raise InvalidQuery(f"mu must be a non-empty tuple of positive integers, got {mu}")
    return tuple(sorted(mu, reverse=True))


def aut_order(mu: Sequence[int]) -> int:
    """|Aut(mu)|: permutations of the tuple that fix it."""
    return prod(factorial(list(mu).count(x)) for x in set(mu))


@dataclass(frozen=True)
class HurwitzQuery:
    mu: Tuple[int, ...]
    g: int
    r: int = 1
    connected: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mu", canonical_mu(self.mu))
        if self.r < 1:
            raise InvalidQuery("r must be a positive integer")
        if self.d % self.r:
            raise InvalidQuery(f"r={self.r} does not divide |mu|={self.d}")

    @property
    def d(self) -> int:
        return sum(self.mu)

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def k(self) -> int:
        return self.d // self.r + 2 * self.g - 2 + self.n


def normalisation(mu: Sequence[int], r: int = 1) -> int:
    """r^{d/r} (d/r)! mu_1 ... mu_n, the denominator of the generating function."""
    d = sum(mu)
    return r ** (d // r) * factorial(d // r) * prod(mu)


@dataclass(frozen=True)
class StructureTable:
    mu: Tuple[int, ...]
    r: int
    combo: ExpCombo
    prefactor: Fraction
    correlator: CorrelatorResult

    @property
    def d(self) -> int:
        return sum(self.mu)

    @property
    def C(self) -> Dict[int, int]:
        return dict(sorted(self.combo.terms.items()))

    def coefficient(self, m: int) -> int:
        return self.combo.coefficient(m)

    def top_coefficient(self) -> int:
        return self.coefficient(comb(self.d, 2))

    def value(self, g: int) -> Fraction:
        k = self.d // self.r + 2 * g - 2 + len(self.mu)
        if g < 0 or k < 0:
            return Fraction(0)
        return Fraction(self.combo.derivative_at_zero(k)) * self.prefactor / 2

    def closed_form(self) -> str:
        d, n = self.d, len(self.mu)
        norm = normalisation(self.mu, self.r)
        kexpr = f"{d // self.r}+2g-2+{n}"
        terms = []
        for m, c in sorted(self.C.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            terms.append(f"{sign} {'' if mag == 1 else str(mag) + '*'}{m}^k")
        body = " ".join(terms).lstrip("+ ")
        if body.startswith("- "):
            body = "-" + body[2:]
        return f"2/{norm} * ({body}), k = {kexpr}"

    def to_json(self) -> dict:
        return {
            "mu": list(self.mu),
            "r": self.r,
            "prefactor": str(self.prefactor),
            "C": {str(m): str(c) for m, c in self.C.items()},
            "parity": self.combo.parity,
        }


_table_cache: Dict[Tuple[Tuple[int, ...], int], StructureTable] = {}
_table_lock = threading.Lock()


def structure_coefficients(mu: Sequence[int], r: int = 1) -> StructureTable:
    """Evaluate the connected correlator for (mu, r) and extract C(mu, m)."""
    mu = canonical_mu(mu)
    key = (mu, r)
    cached = _table_cache.get(key)
    if cached is not None:
        return cached
    d = sum(mu)
    if d % r:
        raise InvalidQuery(f"r={r} does not divide |mu|={d}")
    res = connected(OperatorWord.hurwitz(mu, r))
    combo = to_exp_combo(res.laurent)
    for m, c in combo.terms.items():
        if not isinstance(c, int):
            raise NonIntegerCoefficient(f"C({mu},{m}) = {c} is not an integer")
    table = StructureTable(mu, r, combo, Fraction(2, normalisation(mu, r)), res)
    with _table_lock:
        _table_cache[key] = table
    return table


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def set_partitions(n: int) -> Iterator[List[List[int]]]:
    """All set partitions of {0, ..., n-1}."""
    return _set_partitions(range(n))


def hurwitz_number(q: HurwitzQuery) -> Fraction:
    """Exact (possibly orbifold, possibly disconnected) Hurwitz number."""
    if q.connected:
        if q.g < 0:
            return Fraction(0)
        return structure_coefficients(q.mu, q.r).value(q.g)
    if q.r != 1:
        raise InvalidQuery("disconnected numbers are only provided for r = 1")
    if q.k < 0:
        return Fraction(0)
    return _disconnected_series_value(q.mu, q.k)


def _disconnected_generating(mu: Tuple[int, ...]) -> LaurentPoly:
    val = disconnected(OperatorWord.hurwitz(mu))
    if not val.is_polynomial():
        raise ConsistencyFailure(f"disconnected correlator for {mu} is not a Laurent polynomial")
    return val.num * Fraction(1, normalisation(mu))


def _disconnected_series_value(mu: Tuple[int, ...], k: int) -> Fraction:
    return hbar_coeff(_disconnected_generating(mu), k) * factorial(k)


def _connected_generating(mu: Tuple[int, ...]) -> LaurentPoly:
    return structure_coefficients(mu).correlator.laurent * Fraction(1, normalisation(mu))


def disconnected_by_set_partitions(mu: Sequence[int]) -> LaurentPoly:
    """F^bullet_mu as the sum over set partitions of products of connected F."""
    mu = tuple(mu)
    total = LaurentPoly()
    for blocks in set_partitions(len(mu)):
        term = LaurentPoly.const(1)
        for blk in blocks:
            term = term * _connected_generating(canonical_mu([mu[i] for i in blk]))
        total = total + term
    return total


def disconnected_hurwitz_series(mu: Sequence[int], max_g: int) -> Dict[int, Fraction]:
    """H^bullet_{g;mu} from the lowest genus allowed by k >= 0 up to max_g.

    Computed from the disconnected correlator and independently from the
    set-partition sum of connected generating functions; they must agree.
    """
    mu = canonical_mu(mu)
    d, n = sum(mu), len(mu)
    direct = _disconnected_generating(mu)
    via_parts = disconnected_by_set_partitions(mu)
    g_min = -((d + n - 2) // 2)
    out = {}
    for g in range(g_min, max_g + 1):
        k = d + 2 * g - 2 + n
        if k < 0:
            continue
        a = hbar_coeff(direct, k) * factorial(k)
        b = hbar_coeff(via_parts, k) * factorial(k)
        if a != b:
            raise ConsistencyFailure(f"H^bullet_({g};{mu}): correlator gives {a}, set partitions give {b}")
        out[g] = a
    return out


def classical_hurwitz(g: int, d: int) -> Tuple[Fraction, Dict[int, int]]:
    """Hur_{g,d} = H_{g;1^d} / d! together with B(d, m) = C(1^d, m)."""
    if d < 2:
        raise InvalidQuery("classical Hurwitz numbers need d >= 2")
    table = structure_coefficients((1,) * d)
    B = table.C
    k = 2 * d + 2 * g - 2
    value = Fraction(2, factorial(d) ** 2) * sum(c * m**k for m, c in B.items()) if g >= 0 else Fraction(0)
    return value, B


def asymptotic_estimate(q: HurwitzQuery) -> Fraction:
    """Leading exponential term 2/norm * binom(d,2)^k."""
    return Fraction(2, normalisation(q.mu, q.r)) * comb(q.d, 2) ** q.k


@dataclass(frozen=True)
class AsymptoticReport:
    query: HurwitzQuery
    exact: Fraction
    estimate: Fraction

    @property
    def estimate_over_exact(self) -> Fraction:
        return self.estimate / self.exact

    @property
    def exact_over_estimate(self) -> Fraction:
        return self.exact / self.estimate


def asymptotic_report(q: HurwitzQuery) -> AsymptoticReport:
    return AsymptoticReport(q, hurwitz_number(q), asymptotic_estimate(q))


@dataclass(frozen=True)
class GapReport:
    mu: Tuple[int, ...]
    window: Tuple[int, ...]
    offending: Tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not self.offending


def check_gap_conjecture(mu: Sequence[int], r: int = 1) -> GapReport:
    """C(mu, m) = 0 for binom(d-1,2) < m < binom(d,2)."""
    mu = canonical_mu(mu)
    d = sum(mu)
    if d < 2:
        raise InvalidQuery("the gap statement needs |mu| >= 2")
    table = structure_coefficients(mu, r)
    window = tuple(range(comb(d - 1, 2) + 1, comb(d, 2)))
    bad = tuple(m for m in window if table.coefficient(m) != 0)
    return GapReport(mu, window, bad)


def partitions_of(d: int, max_part: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of d in reverse-lexicographic order."""
    if max_part is None:
        max_part = d
    if d == 0:
        yield ()
        return
    for first in range(min(d, max_part), 0, -1):
        for rest in partitions_of(d - first, first):
            yield (first,) + rest
