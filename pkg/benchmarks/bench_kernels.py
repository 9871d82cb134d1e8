"""Compare the numba and numpy GF(2) row-reduction kernels.

    python3 benchmarks/bench_kernels.py [--sizes 64 256 1024] [--repeat 3]

Both kernels run on the same random matrices; the script checks that their
outputs agree bit for bit and prints the best-of-N wall time for each.
JIT compilation is triggered once before timing.
"""
import argparse
import time

import numpy as np

from synsseq import _kernels


def bench(fn, data, ncols, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        work = data.copy()
        t0 = time.perf_counter()
        out = fn(work, ncols)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; only the numpy kernel is available")
    rng = np.random.default_rng(a.seed)
    jit = _kernels.rref_numba
    jit(np.zeros((2, 1), dtype=np.uint64), 2)  # compile outside the timed region
    print(f"{'n':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in a.sizes:
        nw = (n + 63) // 64
        data = rng.integers(0, 2**63, size=(n, nw), dtype=np.uint64)
        if n % 64:
            data[:, -1] &= np.uint64((1 << (n % 64)) - 1)
        t_np, (r_np, p_np) = bench(_kernels.rref_numpy, data, n, a.repeat)
        t_nb, (r_nb, p_nb) = bench(jit, data, n, a.repeat)
        if not (np.array_equal(r_np, r_nb) and np.array_equal(p_np, p_nb)):
            raise SystemExit(f"kernels disagree at n={n}")
        print(f"{n:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
