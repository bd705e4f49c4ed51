"""Compare the compiled kernels with the numpy fallback.

Run: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from metricdistortion import _kernels_py, kernels
from metricdistortion.adversary import worst_case_distortion
from metricdistortion.election import random_election

try:
    from metricdistortion import _kernels as _compiled
except ImportError:
    _compiled = None


def _best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_floyd_warshall(impl, n, repeat):
    rng = np.random.default_rng(n)
    D0 = rng.random((n, n))
    D0 = np.minimum(D0, D0.T)
    np.fill_diagonal(D0, 0)

    def run():
        D = D0.copy()
        nxt = np.tile(np.arange(n, dtype=np.intp), (n, 1))
        impl.floyd_warshall(D, nxt)

    return _best_of(run, repeat)


def bench_adversary(impl, m, n_elections, repeat):
    rng = np.random.default_rng(m)
    cases = [(e, rng.dirichlet(np.ones(m))) for e in (random_election(rng, m, n_types=6) for _ in range(n_elections))]

    def run():
        for e, p in cases:
            worst_case_distortion(e, p)

    saved = kernels.simplex_iterate
    kernels.simplex_iterate = impl.simplex_iterate
    try:
        return _best_of(run, repeat)
    finally:
        kernels.simplex_iterate = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the fallback is available")
        return

    rows = []
    for n in (40, 120, 300):
        rows.append((f"floyd-warshall n={n}", bench_floyd_warshall(_compiled, n, args.repeat),
                     bench_floyd_warshall(_kernels_py, n, args.repeat)))
    for m, count in ((3, 50), (4, 10)):
        rows.append((f"adversary m={m} x{count}", bench_adversary(_compiled, m, count, args.repeat),
                     bench_adversary(_kernels_py, m, count, args.repeat)))

    print(f"{'kernel':<26}{'compiled (s)':>14}{'python (s)':>14}{'speedup':>10}")
    for name, fast, slow in rows:
        print(f"{name:<26}{fast:>14.4f}{slow:>14.4f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
