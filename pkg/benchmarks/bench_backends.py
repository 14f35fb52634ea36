"""Compare the numba and pure-numpy Jacobi sweep kernels.

    python benchmarks/bench_backends.py [--sizes 5 10 20 50 100] [--repeat 20] [--solve]

Kernel timings call both kernels directly on the same inputs (numba
compilation is triggered once beforehand and excluded). With ``--solve`` a
small end-to-end benchmark is also run in a subprocess per backend, since
the solver picks its backend from NISVP_DISABLE_JIT at import time.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from nisvp import _kernels
from nisvp.svd import compute_svd


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    kernels = {"numpy": _kernels.jacobi_sweeps_numpy}
    if _kernels.HAVE_NUMBA:
        kernels["numba"] = _kernels.jacobi_sweeps_numba
        compute_svd(rng.uniform(0, 1, (3, 3)), kernel=_kernels.jacobi_sweeps_numba)  # compile
    print(f"{'n':>5} " + " ".join(f"{k + ' [ms]':>12}" for k in kernels) + f" {'speedup':>9}")
    for n in sizes:
        A = rng.uniform(0, 10, (n, n))
        ref = compute_svd(A, kernel=_kernels.jacobi_sweeps_numpy).singular_values
        times = {}
        for name, kernel in kernels.items():
            got = compute_svd(A, kernel=kernel).singular_values
            assert np.allclose(got, ref, rtol=1e-12, atol=1e-12 * ref[0]), name
            times[name] = best_time(lambda: compute_svd(A, kernel=kernel), repeat)
        speedup = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{n:>5} " + " ".join(f"{1e3 * t:>12.3f}" for t in times.values()) + f" {speedup:>8.1f}x")


def bench_solve(sizes, trials):
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, NISVP_DISABLE_JIT=flag)
        cmd = [sys.executable, "-m", "nisvp", "bench", "--sizes", *map(str, sizes),
               "--trials", str(trials)]
        t0 = time.perf_counter()
        out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
        print(f"--- solver bench, backend={backend}, wall {time.perf_counter() - t0:.2f}s")
        print(out, end="")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 50, 100])
    p.add_argument("--repeat", type=int, default=10)
    p.add_argument("--solve", action="store_true", help="also time end-to-end solves")
    p.add_argument("--trials", type=int, default=10)
    args = p.parse_args()
    bench_kernels(args.sizes, args.repeat)
    if args.solve:
        bench_solve([n for n in args.sizes if n <= 20], args.trials)


if __name__ == "__main__":
    main()
