"""Pure-Python counting kernels.

Same signatures and results as the compiled ``_kernels`` module; used when
the extension is not built, when HURWITZ_WEDGE_PURE is set, or when counts
could overflow 64-bit integers.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple


def connectivity_table(d: int, edges: Sequence[Tuple[int, int]]) -> bytearray:
    E = len(edges)
    full = (1 << d) - 1
    out = bytearray(1 << E)
    for mask in range(1 << E):
        comp = 1
        changed = True
        while changed:
            changed = False
            for i, (a, b) in enumerate(edges):
                if (mask >> i) & 1 and ((comp >> a) & 1) != ((comp >> b) & 1):
                    comp |= (1 << a) | (1 << b)
                    changed = True
        out[mask] = comp == full
    return out


def enumerate_tuples(mul, T, t_masks, block_start, seeds, k, monotone, conn, nperm):
    all_c: List[int] = [0] * nperm
    trans_c: List[int] = [0] * nperm

    def walk(p: int, m: int, depth: int, lo: int):
        if depth == k:
            all_c[p] += 1
            if conn[m]:
                trans_c[p] += 1
            return
        base = p * T
        for t in range(lo, T):
            walk(mul[base + t], m | t_masks[t], depth + 1, block_start[t] if monotone else 0)

    for p, m in seeds:
        walk(p, m, 0, 0)
    return all_c, trans_c


def apply_transpositions(vec, mul, T, t_lo, t_hi):
    w = [0] * len(vec)
    for p, v in enumerate(vec):
        if v:
            base = p * T
            for t in range(t_lo, t_hi):
                w[mul[base + t]] += v
    return w
