"""Compare the compiled and pure-Python refinement kernels on real tuple tables.

Run: python benchmarks/bench_refine.py [--sizes 5 6 7] [--repeat 3]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from scottkit import _kernels_py
from scottkit.backforth import BfTable
from scottkit.core import make_graph

try:
    from scottkit import _kernels
except ImportError:
    _kernels = None


def random_graph(n: int, seed: int):
    rng = random.Random(seed)
    return make_graph(range(n), [(u, v) for u in range(n) for v in range(u + 1, n)
                                 if rng.random() < 0.5])


def table_arrays(G):
    """Rebuild the (cls0, ptr, idx) arrays BfTable feeds to the kernel."""
    t = BfTable([G])
    ptr = np.zeros(len(t.entries) + 1, dtype=np.int64)
    idx = []
    for i, (side, tup) in enumerate(t.entries):
        for c in G.universe:
            if c not in tup:
                idx.append(t.index[(side, tup + (c,))])
        ptr[i + 1] = len(idx)
    return t.levels[0], ptr, np.asarray(idx, dtype=np.int64)


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 6, 7])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'n':>3} {'tuples':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        cls, ptr, idx = table_arrays(random_graph(n, n))
        py = best_of(_kernels_py.refine_step, (cls, ptr, idx), args.repeat)
        if _kernels is None:
            print(f"{n:>3} {len(cls):>8} {py:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        a, b = _kernels_py.refine_step(cls, ptr, idx), _kernels.refine_step(cls, ptr, idx)
        assert a[1] == b[1] and np.array_equal(a[0], b[0]), "kernels disagree"
        cy = best_of(_kernels.refine_step, (cls, ptr, idx), args.repeat)
        print(f"{n:>3} {len(cls):>8} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
