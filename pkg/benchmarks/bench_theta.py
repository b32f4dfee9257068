"""Benchmark the theta-series kernels: numba @njit path vs. pure-numpy fallback.

The truncated series sum is the package's hot inner loop (every quadrature,
kernel and zero search reduces to it).  Run:

    python benchmarks/bench_theta.py

Set THETA_PHASE_NUMBA=0 to confirm the fallback selection end to end.
"""

import time

import numpy as np

from thetaphase._kernels import (
    BACKEND,
    _theta3_du_sum_numpy,
    _theta3_sum_numpy,
    theta3_du_sum,
    theta3_sum,
)


def bench(fn, u, tau, n_max, repeats=7):
    fn(u, tau, n_max)  # warm up (JIT compile / cache load)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(u, tau, n_max)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    tau = 5j
    print(f"selected backend: {BACKEND}")
    print(f"{'points':>9} {'terms':>6} {'selected':>12} {'numpy':>12} {'speedup':>8}")
    for n_pts in (1_024, 16_384, 262_144):
        u = (rng.uniform(-3, 3, n_pts) + 1j * rng.uniform(-1, 1, n_pts)).astype(np.complex128)
        for n_max in (8, 32, 128):
            t_sel = bench(theta3_sum, u, tau, n_max)
            t_np = bench(_theta3_sum_numpy, u, tau, n_max)
            print(f"{n_pts:>9} {n_max:>6} {t_sel * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms "
                  f"{t_np / t_sel:>7.2f}x")
    u = (rng.uniform(-3, 3, 65_536) + 1j * rng.uniform(-1, 1, 65_536)).astype(np.complex128)
    t_sel = bench(theta3_du_sum, u, tau, 32)
    t_np = bench(_theta3_du_sum_numpy, u, tau, 32)
    print(f"derivative kernel, 65536 pts, 32 terms: "
          f"{t_sel * 1e3:.2f}ms vs numpy {t_np * 1e3:.2f}ms ({t_np / t_sel:.2f}x)")

    # consistency spot check between the two paths
    a = theta3_sum(u, tau, 32)
    b = _theta3_sum_numpy(u, tau, 32)
    print(f"max |numba - numpy| = {np.abs(a - b).max():.3e}")


if __name__ == "__main__":
    main()
