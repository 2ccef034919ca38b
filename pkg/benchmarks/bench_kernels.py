#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on realistic workloads.

    python3 benchmarks/bench_kernels.py --repeat 5

Prints one line per (kernel, backend) with the best wall time, and the speedup.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from toeplitz_ball import _kernels_py
from toeplitz_ball.wirtinger import jet_space


def _load_compiled():
    try:
        from toeplitz_ball import _kernels
    except ImportError:
        return None
    return _kernels


def jet_workload(nvars: int, order: int, seed: int):
    rng = random.Random(seed)
    offsets, js, ks = jet_space(nvars, order).table(order)
    size = len(offsets) - 1

    def vec():
        return [rng.randint(-10**6, 10**6) for _ in range(size)]

    return (vec(), vec(), vec(), vec(), offsets, js, ks)


def rank_workload(rows: int, cols: int, rank: int, seed: int):
    # low-rank product so elimination runs through every column
    rng = random.Random(seed)
    left = [[rng.randint(-9, 9) for _ in range(rank)] for _ in range(rows)]
    right = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rank)]
    re = [[sum(l[k] * right[k][j] for k in range(rank)) for j in range(cols)] for l in left]
    im = [[(i + j) % 3 - 1 for j in range(cols)] for i in range(rows)]
    return re, im


def bench(fn, make_args, repeat: int, number: int) -> float:
    """Best per-call time; argument construction is kept out of the clock."""
    best = float("inf")
    for _ in range(repeat):
        calls = [make_args() for _ in range(number)]
        start = time.perf_counter()
        for a in calls:
            fn(*a)
        best = min(best, (time.perf_counter() - start) / number)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nvars", type=int, default=6, help="jet variables (2N for the z, w pair)")
    ap.add_argument("--order", type=int, default=6)
    ap.add_argument("--size", type=int, default=40, help="matrix side for the rank kernel")
    args = ap.parse_args(argv)

    compiled = _load_compiled()
    backends = [("python", _kernels_py)]
    if compiled is not None:
        backends.append(("cython", compiled))
    else:
        print("compiled extension not built; only the python backend is timed", file=sys.stderr)

    jet_args = jet_workload(args.nvars, args.order, args.seed)
    results = {}
    for name, mod in backends:
        t = bench(mod.jet_mul, lambda: jet_args, args.repeat, 3)
        results[("jet_mul", name)] = t
        out = mod.jet_mul(*jet_args)
        results[("jet_mul_out", name)] = out

    def fresh_rank():
        re, im = rank_workload(args.size, args.size, args.size // 2, args.seed)
        return re, im

    for name, mod in backends:
        t = bench(mod.bareiss_rank, fresh_rank, args.repeat, 1)
        results[("bareiss_rank", name)] = t
        results[("bareiss_out", name)] = mod.bareiss_rank(*fresh_rank())

    if compiled is not None:
        py_out = [list(v) for v in results[("jet_mul_out", "python")]]
        assert py_out == [list(v) for v in results[("jet_mul_out", "cython")]], "jet_mul backends disagree"
        assert results[("bareiss_out", "python")] == results[("bareiss_out", "cython")], "rank backends disagree"

    size = len(jet_args[0])
    print(f"jet_mul: {args.nvars} variables, order {args.order}, {size} coefficients")
    print(f"bareiss_rank: {args.size}x{args.size}, rank {results[('bareiss_out', 'python')]}")
    for kernel in ("jet_mul", "bareiss_rank"):
        base = results[(kernel, "python")]
        for name, _ in backends:
            t = results[(kernel, name)]
            print(f"{kernel:14s} {name:7s} {t * 1e3:10.2f} ms  x{base / t:5.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
