"""Time the numba and numpy Monte Carlo kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--samples 32768] [--repeat 5]
"""
import argparse
import time

import numpy as np

from zonal import _kernels as K


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1 << 15)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba unavailable (or ZONAL_DISABLE_NUMBA set); nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'N':>3}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for N in (2, 3, 4, 5):
        G = rng.standard_normal((args.samples, N, N))
        x = np.exp(1j * rng.uniform(-3, 3, N))
        rows, sizes = K.subset_table(N, N - 1)
        w = K.subset_weights(x, rows, sizes)
        Q = K.orthonormalize_numpy(G)
        # warm the JIT before timing
        K.orthonormalize_numba(G[:2])
        K.xi_numba(Q[:2], rows, sizes, w, N - 1)
        assert np.abs(K.orthonormalize_numba(G) - Q).max() <= 1e-12
        assert np.abs(K.xi_numba(Q, rows, sizes, w, N - 1) - K.xi_numpy(Q, rows, sizes, w, N - 1)).max() <= 1e-12
        cases = [
            ("orthonormalize", lambda: K.orthonormalize_numpy(G), lambda: K.orthonormalize_numba(G)),
            ("xi", lambda: K.xi_numpy(Q, rows, sizes, w, N - 1), lambda: K.xi_numba(Q, rows, sizes, w, N - 1)),
        ]
        for name, slow, fast in cases:
            a, b = best_of(slow, args.repeat), best_of(fast, args.repeat)
            print(f"{name:<16}{N:>3}{a * 1e3:>13.2f}{b * 1e3:>13.2f}{a / b:>8.1f}x")


if __name__ == "__main__":
    main()
