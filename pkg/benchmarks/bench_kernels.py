"""Time the compiled kernels against the numpy fallback on random instances.

    python benchmarks/bench_kernels.py [--n 3] [--m 11] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import time

from fairdiv import _pykernels, kernels
from fairdiv.core import random_instance

try:
    from fairdiv import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--m", type=int, default=11)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    inst = random_instance(args.n, args.m, random.Random(args.seed))
    scale, rows = inst.scaled()
    A = kernels.integer_matrix(scale, rows)
    backends = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    print(f"n={args.n} m={args.m} allocations={args.n ** args.m}")
    results = {}
    for name, impl in backends:
        t_table = best_time(lambda: kernels.utility_table(A, backend=impl), args.repeat)
        t_flags = best_time(lambda: kernels.envy_flags(A, backend=impl), args.repeat)
        U = kernels.utility_table(A, backend=impl)
        t_pareto = best_time(lambda: kernels.pareto_mask(U[: min(len(U), 20000)], backend=impl), args.repeat)
        results[name] = (t_table, t_flags, t_pareto)
        print(f"{name:7s} table {t_table:8.4f}s  envy {t_flags:8.4f}s  pareto(20k) {t_pareto:8.4f}s")
    if "cython" in results:
        py, cy = results["python"], results["cython"]
        print("speedup " + "  ".join(f"{p / c:6.1f}x" for p, c in zip(py, cy)))
    else:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
