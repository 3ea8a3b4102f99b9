#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py [--size 648] [--q 32] [--repeats 3]

Covers the two hot paths (GF matrix multiply, Gauss-Jordan elimination) at
the sizes the acceptance suite hits, plus one end-to-end code build.
"""

import argparse
import time

import numpy as np


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=648)
    ap.add_argument("--q", type=int, default=32)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    from mdsarray import _kernels_py
    from mdsarray.gf import build_field

    impls = [("python", _kernels_py)]
    try:
        from mdsarray import _kernels

        impls.insert(0, ("compiled", _kernels))
    except ImportError:
        print("compiled extension not built; benchmarking the fallback only")

    field = build_field(args.q)
    rng = np.random.RandomState(0)
    n = args.size
    a = rng.randint(0, args.q, (n, n)).astype(np.uint16)
    b = rng.randint(0, args.q, (n, n)).astype(np.uint16)

    print(f"size {n}x{n} over GF({args.q}), best of {args.repeats}")
    print(f"{'kernel':<12}{'backend':<10}{'seconds':>10}")
    results = {}
    for name, impl in impls:
        t = bench(lambda: impl.matmul(a, b, field.exp, field.log, field.p), args.repeats)
        results[("matmul", name)] = t
        print(f"{'matmul':<12}{name:<10}{t:>10.3f}")
    for name, impl in impls:
        def run(impl=impl):
            work = np.ascontiguousarray(np.hstack([a, np.eye(n, dtype=np.uint16)]))
            impl.row_reduce(work, n, field.exp, field.log, args.q - 1, field.p, True)

        t = bench(run, args.repeats)
        results[("row_reduce", name)] = t
        print(f"{'row_reduce':<12}{name:<10}{t:>10.3f}")

    if len(impls) == 2:
        for kernel in ("matmul", "row_reduce"):
            speedup = results[(kernel, "python")] / results[(kernel, "compiled")]
            print(f"{kernel}: compiled is {speedup:.1f}x faster")

    import os
    import subprocess
    import sys

    print("\nend-to-end: build + lift the (6,3) {2,3} code")
    script = (
        "import time; t0=time.time(); "
        "from mdsarray.vbk import build_vbk; "
        "from mdsarray.transform import DegreeSet, upgrade_all_nodes; "
        "upgrade_all_nodes(build_vbk(6,3,2,degrees=(2,3),seed=0), DegreeSet.make((2,3))); "
        "print(f'  {time.time()-t0:.3f}s')"
    )
    for name, _ in impls:
        env = dict(os.environ, MDSARRAY_BACKEND=name if name == "python" else "")
        print(f"backend {name}:", flush=True)
        subprocess.run([sys.executable, "-c", script], env=env, check=True)


if __name__ == "__main__":
    main()
