"""Brute-force permutation counts: the independent ground truth.

Nothing here touches the wedge space.  Counts are taken straight from the
symmetric group, either by walking every tuple of transpositions or by
repeated multiplication with the transposition class sum.

Conventions: products compose right to left and a tuple (t_1, ..., t_k)
multiplies to t_1 t_2 ... t_k.  A count "for mu" sums over every product of
cycle type mu; a count for a fixed permutation looks at that one product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import kernels
from .perm import Perm, cycle_type, sign, standard_perm, symmetric_group

DEFAULT_BUDGET = 10**8
MAX_CONVOLUTION_DEGREE = 7
MAX_MONOTONE_DEGREE = 6


class BudgetExceeded(RuntimeError):
    pass


class DegreeTooLarge(ValueError):
    pass


class ParityViolation(AssertionError):
    pass


def _mu(mu: Sequence[int]) -> Tuple[int, ...]:
    mu = tuple(sorted((int(x) for x in mu), reverse=True))
    if any(x <= 0 for x in mu):
        raise ValueError(f"parts must be positive, got {mu}")
    return mu


def _aut(mu: Sequence[int]) -> int:
    return prod(factorial(list(mu).count(x)) for x in set(mu))


def _class_size(mu: Sequence[int]) -> int:
    return factorial(sum(mu)) // (_aut(mu) * prod(mu))


def _class_sign(mu: Sequence[int]) -> int:
    return -1 if (sum(mu) - len(mu)) % 2 else 1


@dataclass(frozen=True)
class FactorizationQuery:
    """k-tuples of transpositions in S_d whose product is a given permutation or lies in a class.

    ``target`` is a cycle type (partition of d) or, with ``fixed=True``, a
    permutation given as a tuple of images.
    """

    d: int
    target: Tuple[int, ...]
    k: int
    transitive: bool = True
    monotone: bool = False
    orbifold_r: Optional[int] = None
    fixed: bool = False

    def __post_init__(self):
        target = tuple(int(x) for x in self.target)
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if self.fixed:
            if sorted(target) != list(range(self.d)):
                raise ValueError(f"{target} is not a permutation of 0..{self.d - 1}")
        else:
            target = _mu(target)
            if sum(target) != self.d:
                raise ValueError(f"{target} does not partition {self.d}")
        object.__setattr__(self, "target", target)
        if self.orbifold_r is not None and (self.orbifold_r < 1 or self.d % self.orbifold_r):
            raise ValueError(f"r={self.orbifold_r} must divide d={self.d}")

    @property
    def mu(self) -> Tuple[int, ...]:
        return cycle_type(self.target) if self.fixed else self.target

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "target": list(self.target),
            "fixed": self.fixed,
            "k": self.k,
            "transitive": self.transitive,
            "monotone": self.monotone,
            "orbifold_r": self.orbifold_r,
        }


@dataclass
class OracleResult:
    query: FactorizationQuery
    count: int
    weighted: Fraction
    method: str

    def to_json(self) -> dict:
        return {
            "query": self.query.to_json(),
            "count": str(self.count),
            "weighted": str(self.weighted),
            "method": self.method,
        }


def _targets(group, q: FactorizationQuery) -> List[int]:
    if q.fixed:
        return [group.index[q.target]]
    return group.class_indices(q.target)


def _check_parity(q: FactorizationQuery, count: int):
    expected = _class_sign(q.mu)
    if q.orbifold_r:
        r = q.orbifold_r
        expected *= -1 if (q.d - q.d // r) % 2 else 1
    if count and (-1) ** q.k != expected:
        raise ParityViolation(f"nonzero count {count} for {q} violates the sign constraint")


def _seeds(group, q: FactorizationQuery) -> List[Tuple[int, int]]:
    if not q.orbifold_r or q.orbifold_r == 1:
        return [(group.identity, 0)]
    alpha_type = (q.orbifold_r,) * (q.d // q.orbifold_r)
    return [(i, group.cycle_mask(group.elements[i])) for i in group.class_indices(alpha_type)]


def count_factorizations(q: FactorizationQuery, budget: int = DEFAULT_BUDGET, backend: str = None) -> int:
    """Exhaustive count: walk every k-tuple, test the product and transitivity."""
    group = symmetric_group(q.d)
    seeds = _seeds(group, q)
    T = len(group.transpositions)
    work = len(seeds) * T**q.k
    if work > budget:
        raise BudgetExceeded(f"{work} tuples exceeds the budget {budget}")
    all_c, trans_c = kernels.enumerate_tuples(q.d, seeds, q.k, q.monotone, backend)
    counts = trans_c if q.transitive else all_c
    total = sum(counts[i] for i in _targets(group, q))
    _check_parity(q, total)
    return total


@lru_cache(maxsize=None)
def _convolution_powers(d: int, k_max: int) -> Tuple[Tuple[int, ...], ...]:
    group = symmetric_group(d)
    vec = [0] * group.order
    vec[group.identity] = 1
    out = [tuple(vec)]
    for _ in range(k_max):
        vec = kernels.apply_transpositions(d, vec)
        out.append(tuple(vec))
    return tuple(out)


def _powers(d: int, k: int):
    # grow in chunks so the cache is reused across nearby k
    k_max = max(8, 1 << (k - 1).bit_length()) if k else 8
    return _convolution_powers(d, k_max)[k]


def count_by_convolution(q: FactorizationQuery) -> int:
    """Disconnected count via the k-th power of the transposition class sum."""
    if q.transitive:
        raise ValueError("transitivity cannot be tracked by convolution")
    if q.monotone or q.orbifold_r not in (None, 1):
        raise ValueError("convolution covers plain (non-monotone, r=1) counts only")
    if q.d > MAX_CONVOLUTION_DEGREE:
        raise DegreeTooLarge(f"d={q.d} exceeds {MAX_CONVOLUTION_DEGREE}")
    group = symmetric_group(q.d)
    vec = _powers(q.d, q.k)
    total = sum(vec[i] for i in _targets(group, q))
    _check_parity(q, total)
    return total


def _fixed_disconnected(mu: Tuple[int, ...], k: int) -> int:
    """Tuples with product equal to one fixed permutation of type mu."""
    if not mu:
        return 1 if k == 0 else 0
    d = sum(mu)
    total = count_by_convolution(FactorizationQuery(d, mu, k, transitive=False))
    return total // _class_size(mu)


def _connected_by_subsets(mu: Tuple[int, ...], k: int, disc, mix) -> int:
    """Connected count from disconnected ones, cycles of the target labelled.

    Splits off the orbit containing cycle 0: disc(S) = sum over blocks B
    containing 0 and j of mix(k, j) * conn(B, j) * disc(S \\ B, k - j).
    """

    @lru_cache(maxsize=None)
    def conn(sub: Tuple[int, ...], kk: int) -> int:
        n = len(sub)
        val = disc(sub, kk)
        rest_idx = range(1, n)
        for mask in range(1 << (n - 1)):
            inside = [0] + [i for i in rest_idx if (mask >> (i - 1)) & 1]
            if len(inside) == n:
                continue
            block = _mu([sub[i] for i in inside])
            other = _mu([sub[i] for i in range(n) if i not in inside])
            for j in range(kk + 1):
                c = conn(block, j)
                if c:
                    val -= mix(kk, j) * c * disc(other, kk - j)
        return val

    return conn(_mu(mu), k)


def connected_fixed_count(mu: Sequence[int], k: int) -> int:
    """Transitive tuples with product equal to one fixed permutation of type mu."""
    mu = _mu(mu)
    if sum(mu) > MAX_CONVOLUTION_DEGREE:
        raise DegreeTooLarge(f"d={sum(mu)} exceeds {MAX_CONVOLUTION_DEGREE}")
    return _connected_by_subsets(mu, k, _fixed_disconnected, comb)


def connected_count(d: int, mu: Sequence[int], k: int) -> Fraction:
    """|Aut(mu)|/d! times the transitive count, via inclusion-exclusion on convolution counts."""
    mu = _mu(mu)
    if sum(mu) != d:
        raise ValueError(f"{mu} does not partition {d}")
    return Fraction(connected_fixed_count(mu, k), prod(mu))


# monotone tuples ------------------------------------------------------------


@lru_cache(maxsize=None)
def _monotone_table(d: int, k_max: int) -> Tuple[Tuple[int, ...], ...]:
    """table[j][p] = number of monotone j-tuples with product p, j <= k_max.

    Processes the blocks b = 2..d (transpositions (a b), a < b) in order; each
    block multiplies the running series by (1 - t J_b)^{-1}.
    """
    group = symmetric_group(d)
    series = [[0] * group.order for _ in range(k_max + 1)]
    series[0][group.identity] = 1
    if d >= 2:
        starts = sorted(set(group.block_start)) + [len(group.transpositions)]
        for lo, hi in zip(starts, starts[1:]):
            for j in range(1, k_max + 1):
                step = kernels.apply_transpositions(d, series[j - 1], lo, hi)
                series[j] = [x + y for x, y in zip(series[j], step)]
    return tuple(tuple(row) for row in series)


def _monotone_row(d: int, k: int):
    k_max = max(8, 1 << (k - 1).bit_length()) if k else 8
    return _monotone_table(d, k_max)[k]


def _fixed_monotone_disconnected(mu: Tuple[int, ...], k: int) -> int:
    if not mu:
        return 1 if k == 0 else 0
    return _monotone_row(sum(mu), k)[symmetric_group(sum(mu)).index[standard_perm(mu)]]


def monotone_connected_fixed(mu: Sequence[int], k: int) -> int:
    """Transitive monotone tuples with a fixed product of type mu.

    Orbits partition the support, so the letters b of different orbits are
    distinct and a disconnected monotone tuple interleaves its connected
    pieces in exactly one way: no multinomial factor.
    """
    mu = _mu(mu)
    if sum(mu) > MAX_MONOTONE_DEGREE:
        raise DegreeTooLarge(f"d={sum(mu)} exceeds {MAX_MONOTONE_DEGREE}")
    return _connected_by_subsets(mu, k, _fixed_monotone_disconnected, lambda kk, j: 1)


def monotone_count(d: int, target: Union[Sequence[int], Perm], k: int, fixed_target: bool = True,
                   transitive: bool = False, budget: int = DEFAULT_BUDGET) -> int:
    """Monotone k-tuples multiplying to ``target``.

    ``target`` is a permutation (fixed_target=True) or a cycle type (summed
    over its class).  Disconnected counts come from the block DP; transitive
    ones by inclusion-exclusion, or exhaustively if the DP is out of range.
    """
    if d > MAX_MONOTONE_DEGREE:
        raise DegreeTooLarge(f"d={d} exceeds {MAX_MONOTONE_DEGREE}")
    group = symmetric_group(d)
    if fixed_target:
        perm = tuple(target)
        mu = cycle_type(perm)
        idx = [group.index[perm]]
    else:
        mu = _mu(target)
        if sum(mu) != d:
            raise ValueError(f"{mu} does not partition {d}")
        idx = group.class_indices(mu)
    if transitive:
        # a class function: every permutation of type mu has the same count
        total = monotone_connected_fixed(mu, k) * len(idx)
    else:
        row = _monotone_row(d, k)
        total = sum(row[i] for i in idx)
    if total and (-1) ** k != _class_sign(mu):
        raise ParityViolation(f"nonzero monotone count for {mu}, k={k}")
    return total


# orbifold ------------------------------------------------------------------


def orbifold_weight(d: int, r: int, mu: Sequence[int]) -> Fraction:
    """Weight per tuple, fixed so that r = 1 gives connected_count: |Aut(mu)|/d!."""
    return Fraction(_aut(_mu(mu)), factorial(d))


# Extra factor on top of orbifold_weight; 1 reproduces the wedge values for
# r = 2, 3, 4 at d <= 4 and for r = 2, 3 at d = 6, g = 0 (see the tests).
ORBIFOLD_CALIBRATION = Fraction(1)


def orbifold_raw_count(d: int, r: int, mu: Sequence[int], k: int, budget: int = DEFAULT_BUDGET) -> int:
    """Tuples (alpha, t_1, ..., t_k), alpha of type (r, ..., r), with product of type mu, jointly transitive."""
    q = FactorizationQuery(d, _mu(mu), k, transitive=True, orbifold_r=r)
    return count_factorizations(q, budget)


def orbifold_count(d: int, r: int, mu: Sequence[int], k: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    if d > MAX_MONOTONE_DEGREE:
        raise DegreeTooLarge(f"d={d} exceeds {MAX_MONOTONE_DEGREE}")
    raw = orbifold_raw_count(d, r, mu, k, budget)
    return raw * orbifold_weight(d, r, mu) * ORBIFOLD_CALIBRATION


def evaluate(q: FactorizationQuery, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Pick a method for ``q`` and return the count with its |Aut(mu)|/d! weighting."""
    if q.monotone and not q.orbifold_r:
        count = monotone_count(q.d, q.target, q.k, q.fixed, q.transitive, budget)
        method = "dp"
    elif not q.transitive and not q.orbifold_r and q.d <= MAX_CONVOLUTION_DEGREE:
        count = count_by_convolution(q)
        method = "convolution"
    else:
        count = count_factorizations(q, budget)
        method = "exhaustive"
    if q.fixed:
        weighted = Fraction(count)
    else:
        weighted = Fraction(count * _aut(q.mu), factorial(q.d))
    return OracleResult(q, count, weighted, method)


__all__ = [
    "BudgetExceeded",
    "DegreeTooLarge",
    "FactorizationQuery",
    "OracleResult",
    "ParityViolation",
    "connected_count",
    "connected_fixed_count",
    "count_by_convolution",
    "count_factorizations",
    "evaluate",
    "monotone_connected_fixed",
    "monotone_count",
    "orbifold_count",
    "orbifold_raw_count",
    "orbifold_weight",
    "sign",
]
