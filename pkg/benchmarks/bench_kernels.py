"""Compare the compiled and pure-Python sampling kernels.

    python3 benchmarks/bench_kernels.py [--trials 200000] [--outcomes 31] [--repeat 3]

Prints the best-of-``repeat`` wall time of each backend and checks that
both produce identical histograms and draw sequences.
"""

import argparse
import time

import numpy as np

from manyletter import _kernels_py, rng

try:
    from manyletter import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--outcomes", type=int, default=31)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args(argv)

    p = np.random.default_rng(args.seed).dirichlet(np.ones(args.outcomes))
    backends = [("python", _kernels_py)]
    if _kernels_c is None:
        print("compiled kernel not built; timing the fallback only")
    else:
        backends.insert(0, ("cython", _kernels_c))
    print(f"default backend: {rng.BACKEND}; trials={args.trials} outcomes={args.outcomes}")

    results = {}
    for name, mod in backends:
        t_counts, counts = best_time(
            lambda: rng.sample_counts(p, args.trials, args.seed, backend=mod), args.repeat
        )
        t_draws, draws = best_time(
            lambda: rng.sample_indices(p, args.trials, args.seed, backend=mod), args.repeat
        )
        results[name] = (t_counts, t_draws, counts, draws)
        rate = args.trials / t_counts / 1e6
        print(f"{name:>7}: counts {t_counts * 1e3:9.2f} ms ({rate:6.2f} M draws/s)  indices {t_draws * 1e3:9.2f} ms")

    if len(results) == 2:
        c, py = results["cython"], results["python"]
        same = np.array_equal(c[2], py[2]) and np.array_equal(c[3], py[3])
        print(f"speedup: {py[0] / c[0]:.1f}x  parity: {'identical' if same else 'MISMATCH'}")
        return 0 if same else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
