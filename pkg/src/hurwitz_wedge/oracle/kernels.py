"""Kernel selection: compiled extension if importable, pure Python otherwise.

Set HURWITZ_WEDGE_PURE=1 to force the Python kernels.  Convolution steps whose
entries could leave the signed 64-bit range always run in Python.
"""

from __future__ import annotations

import os
from array import array
from functools import lru_cache

from . import _pykernels

_compiled = None
if not os.environ.get("HURWITZ_WEDGE_PURE"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

_INT64_SAFE = 1 << 62


def backend(name: str = None):
    """Return the kernel module for ``name`` ("compiled"/"python"), default the active one."""
    if name is None:
        name = BACKEND
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if name == "python":
        return _pykernels
    raise ValueError(f"unknown backend {name!r}")


class Tables:
    """Flat tables for one S_d in the layout the kernels expect."""

    def __init__(self, group):
        self.group = group
        self.T = len(group.transpositions)
        self.nperm = group.order
        flat = [x for row in group.mul for x in row]
        self.mul_list = flat
        self.mul_arr = array("i", flat)
        self.t_masks_list = list(group.t_masks)
        self.t_masks_arr = array("q", group.t_masks)
        self.block_start_list = list(group.block_start)
        self.block_start_arr = array("i", group.block_start)


@lru_cache(maxsize=None)
def tables(d: int) -> Tables:
    from .perm import symmetric_group

    return Tables(symmetric_group(d))


@lru_cache(maxsize=None)
def connectivity(d: int, name: str = None):
    grp = tables(d).group
    if d == 1:
        return bytearray(b"\x01")
    return backend(name).connectivity_table(d, grp.transpositions)


def enumerate_tuples(d: int, seeds, k: int, monotone: bool, name: str = None):
    tb = tables(d)
    conn = connectivity(d, name)
    kern = backend(name)
    if kern is _compiled:
        a, t = kern.enumerate_tuples(tb.mul_arr, tb.T, tb.t_masks_arr, tb.block_start_arr,
                                     list(seeds), k, monotone, conn, tb.nperm)
        return list(a), list(t)
    return kern.enumerate_tuples(tb.mul_list, tb.T, tb.t_masks_list, tb.block_start_list,
                                 list(seeds), k, monotone, conn, tb.nperm)


def apply_transpositions(d: int, vec, t_lo: int = 0, t_hi: int = None, name: str = None):
    """Right-multiply the group-algebra element ``vec`` by a sum of transpositions."""
    tb = tables(d)
    if t_hi is None:
        t_hi = tb.T
    kern = backend(name)
    if kern is _compiled:
        bound = max((abs(v) for v in vec), default=0) * max(t_hi - t_lo, 1)
        if bound < _INT64_SAFE:
            return list(kern.apply_transpositions(array("q", vec), tb.mul_arr, tb.T, t_lo, t_hi))
    return _pykernels.apply_transpositions(vec, tb.mul_list, tb.T, t_lo, t_hi)
