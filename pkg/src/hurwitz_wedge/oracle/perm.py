"""Symmetric group tables used by the counting kernels.

Permutations of {0..d-1} are tuples of images, indexed in lexicographic
order.  Products compose right-to-left: (p*q)(x) = p(q(x)).  Transpositions
(a b) with a < b are listed ordered by (b, a), so the monotone blocks are
contiguous.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

Perm = Tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def cycles(p: Perm) -> List[Tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        cyc = []
        x = s
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Perm) -> Tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def sign(p: Perm) -> int:
    return -1 if (len(p) - len(cycles(p))) % 2 else 1


def perm_from_cycles(d: int, cyc: Sequence[Sequence[int]]) -> Perm:
    img = list(range(d))
    for c in cyc:
        for i, x in enumerate(c):
            img[x] = c[(i + 1) % len(c)]
    return tuple(img)


def standard_perm(mu: Sequence[int]) -> Perm:
    """A fixed permutation of cycle type mu: consecutive blocks as cycles."""
    d = sum(mu)
    cyc, start = [], 0
    for m in mu:
        cyc.append(tuple(range(start, start + m)))
        start += m
    return perm_from_cycles(d, cyc)


class SymmetricGroup:
    """Index tables for S_d, d small."""

    def __init__(self, d: int):
        self.d = d
        self.elements: List[Perm] = list(permutations(range(d)))
        self.index: Dict[Perm, int] = {p: i for i, p in enumerate(self.elements)}
        self.identity = self.index[tuple(range(d))]
        self.transpositions: List[Tuple[int, int]] = [(a, b) for b in range(1, d) for a in range(b)]
        self.t_perms = [perm_from_cycles(d, [t]) for t in self.transpositions]
        edge_bit = {}
        for i, (a, b) in enumerate(self.transpositions):
            edge_bit[(a, b)] = 1 << i
        self.edge_bit = edge_bit
        self.t_masks = [1 << i for i in range(len(self.transpositions))]
        # mul[p][t] = index of p * t
        self.mul: List[List[int]] = [
            [self.index[compose(p, t)] for t in self.t_perms] for p in self.elements
        ]
        # first transposition index with larger element b (monotone blocks)
        self.block_start: List[int] = []
        for i, (_, b) in enumerate(self.transpositions):
            self.block_start.append(next(j for j, (_, bb) in enumerate(self.transpositions) if bb == b))
        self.types: List[Tuple[int, ...]] = [cycle_type(p) for p in self.elements]

    @property
    def order(self) -> int:
        return len(self.elements)

    def class_indices(self, mu: Sequence[int]) -> List[int]:
        mu = tuple(sorted(mu, reverse=True))
        return [i for i, t in enumerate(self.types) if t == mu]

    def cycle_mask(self, p: Perm) -> int:
        """Edge mask joining consecutive elements of each cycle of p."""
        mask = 0
        for c in cycles(p):
            for i in range(len(c) - 1):
                a, b = sorted((c[i], c[i + 1]))
                mask |= self.edge_bit[(a, b)]
        return mask


@lru_cache(maxsize=None)
def symmetric_group(d: int) -> SymmetricGroup:
    return SymmetricGroup(d)
