# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; ``_pykernels`` holds the reference versions."""

from array import array

from libc.stdlib cimport malloc, free


def connectivity_table(int d, edges):
    """conn[mask] = 1 iff the edges in mask connect all d vertices."""
    cdef int E = len(edges)
    cdef long long nmask = 1 << E
    cdef int i, v, changed
    cdef long long mask
    cdef unsigned int comp, full = (1u << d) - 1
    cdef int *ea = <int *> malloc(E * sizeof(int))
    cdef int *eb = <int *> malloc(E * sizeof(int))
    out = array("B", bytes(nmask))
    cdef unsigned char[:] conn = out
    for i in range(E):
        ea[i] = edges[i][0]
        eb[i] = edges[i][1]
    try:
        for mask in range(nmask):
            comp = 1
            changed = 1
            while changed:
                changed = 0
                for i in range(E):
                    if (mask >> i) & 1:
                        if ((comp >> ea[i]) & 1) != ((comp >> eb[i]) & 1):
                            comp |= (1u << ea[i]) | (1u << eb[i])
                            changed = 1
            conn[mask] = 1 if comp == full else 0
    finally:
        free(ea)
        free(eb)
    return out


def enumerate_tuples(int[:] mul, int T, long long[:] t_masks, int[:] block_start,
                     seeds, int k, bint monotone, unsigned char[:] conn, int nperm):
    """Visit every k-tuple of transpositions after each (perm, mask) seed.

    Returns (all_counts, transitive_counts) indexed by the final product.
    """
    all_out = array("q", bytes(8 * nperm))
    trans_out = array("q", bytes(8 * nperm))
    cdef long long[:] all_c = all_out
    cdef long long[:] trans_c = trans_out
    cdef int *prod = <int *> malloc((k + 1) * sizeof(int))
    cdef long long *mask = <long long *> malloc((k + 1) * sizeof(long long))
    cdef int *tnext = <int *> malloc((k + 1) * sizeof(int))
    cdef int depth, t, p2, start
    cdef long long m2
    try:
        for seed in seeds:
            prod[0] = seed[0]
            mask[0] = seed[1]
            if k == 0:
                all_c[prod[0]] += 1
                if conn[mask[0]]:
                    trans_c[prod[0]] += 1
                continue
            depth = 0
            tnext[0] = 0
            while depth >= 0:
                t = tnext[depth]
                if t >= T:
                    depth -= 1
                    continue
                tnext[depth] = t + 1
                p2 = mul[prod[depth] * T + t]
                m2 = mask[depth] | t_masks[t]
                if depth + 1 == k:
                    all_c[p2] += 1
                    if conn[m2]:
                        trans_c[p2] += 1
                else:
                    depth += 1
                    prod[depth] = p2
                    mask[depth] = m2
                    tnext[depth] = block_start[t] if monotone else 0
    finally:
        free(prod)
        free(mask)
        free(tnext)
    return all_out, trans_out


def apply_transpositions(long long[:] vec, int[:] mul, int T, int t_lo, int t_hi):
    """w[p * t] += vec[p] for every transposition index t in [t_lo, t_hi)."""
    cdef Py_ssize_t n = vec.shape[0]
    out = array("q", bytes(8 * n))
    cdef long long[:] w = out
    cdef Py_ssize_t p
    cdef int t
    cdef long long v
    for p in range(n):
        v = vec[p]
        if v == 0:
            continue
        for t in range(t_lo, t_hi):
            w[mul[p * T + t]] += v
    return out
