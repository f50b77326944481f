"""Compiled vs pure-Python counting kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends must return identical counts; the script exits nonzero if not.
"""

import argparse
import sys
import time

from hurwitz_wedge.oracle import kernels
from hurwitz_wedge.oracle.perm import symmetric_group

CASES = [
    # (label, d, k, monotone)
    ("enumerate S_4, k=6", 4, 6, False),
    ("enumerate S_5, k=5", 5, 5, False),
    ("enumerate S_5, k=7, monotone", 5, 7, True),
]


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.BACKEND != "compiled":
        print("compiled kernels not built; nothing to compare", file=sys.stderr)
        return 1
    ok = True
    print(f"{'case':34} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, d, k, mono in CASES:
        seeds = [(symmetric_group(d).identity, 0)]
        kernels.connectivity(d, "python"), kernels.connectivity(d, "compiled")
        tp, rp = _time(lambda: kernels.enumerate_tuples(d, seeds, k, mono, "python"), args.repeat)
        tc, rc = _time(lambda: kernels.enumerate_tuples(d, seeds, k, mono, "compiled"), args.repeat)
        ok &= rp == rc
        print(f"{label:34} {tp:10.3f} {tc:11.4f} {tp / tc:7.0f}x")
    for d, k in [(6, 10), (7, 6)]:
        n = symmetric_group(d).order
        vec = [0] * n
        vec[symmetric_group(d).identity] = 1

        def run(name):
            v = vec
            for _ in range(k):
                v = kernels.apply_transpositions(d, v, name=name)
            return v

        tp, rp = _time(lambda: run("python"), args.repeat)
        tc, rc = _time(lambda: run("compiled"), args.repeat)
        ok &= rp == rc
        print(f"{f'convolution S_{d}, k={k}':34} {tp:10.3f} {tc:11.4f} {tp / tc:7.0f}x")
    print("results identical" if ok else "MISMATCH between backends")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
