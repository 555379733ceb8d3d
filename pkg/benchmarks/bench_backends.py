"""Compare the numba and numpy kernels on the hot paths.

Both flavours are called directly, so the PSLOPT_DISABLE_NUMBA flag does not
matter here. Run with ``python3 benchmarks/bench_backends.py [--lengths ...]``.
"""

import argparse
import time

import numpy as np

from pslopt import kernels


def _timeit(fn, repeat):
    fn()  # warm-up (and numba compile)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_length(n, probes, repeat, rng):
    psi = np.where(rng.integers(0, 2, size=n) == 1, 1, -1).astype(np.int8)
    omega = kernels.sidelobes_numpy(psi)
    best_seq = psi.copy()
    count = min(probes, n)
    rows = {}

    # cost 0 means no probe is accepted, so every probe flips twice and evaluates once
    rows["scan/probe"] = (
        _timeit(lambda: kernels.scan_numba(psi, omega, 0, count, 0, 0, 0, best_seq), repeat) / count,
        _timeit(lambda: kernels.scan_numpy(psi, omega, 0, count, 0, 0, best_seq), repeat) / count,
    )
    rows["flip"] = (
        _timeit(lambda: kernels.flip_numba(n // 3, psi, omega), repeat),
        _timeit(lambda: kernels.flip_numpy(n // 3, psi, omega), repeat),
    )
    rows["evaluate"] = (
        _timeit(lambda: kernels.evaluate_numba(omega), repeat),
        _timeit(lambda: kernels.evaluate_numpy(omega), repeat),
    )
    rows["sidelobes"] = (
        _timeit(lambda: kernels.sidelobes_numba(psi), repeat),
        _timeit(lambda: kernels.sidelobes_numpy(psi), repeat),
    )
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lengths", default="64,1019,8191,65536")
    parser.add_argument("--probes", type=int, default=2000, help="probes per scan timing")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    print(f"{'n':>7} {'kernel':<11} {'numba_us':>11} {'numpy_us':>11} {'speedup':>8}")
    for n in (int(x) for x in args.lengths.split(",")):
        for name, (t_nb, t_np) in bench_length(n, args.probes, args.repeat, rng).items():
            print(f"{n:>7} {name:<11} {t_nb * 1e6:>11.2f} {t_np * 1e6:>11.2f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
