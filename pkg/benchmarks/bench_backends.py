"""Compare the numba kernels with their numpy fallbacks.

Run with ``python3 benchmarks/bench_backends.py [--repeat 5]``. Each kernel is
timed on both backends (numba after a warm-up call, so compile time is not
counted) and the outputs are checked for agreement.
"""
import argparse
import math
import time

import numpy as np

from gue_linstat._accel import numba_kernels, numpy_kernels
from gue_linstat.montecarlo import GueSampler


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def case_hermite(n=2000, points=20000):
    t = np.linspace(-3 * math.sqrt(n), 3 * math.sqrt(n), points)
    return (lambda mod: mod.hermite_pair(n, t)), f"hermite_pair n={n} points={points}"


def case_kernel_square(n=200, nodes=2000):
    x = np.linspace(-2.2, 2.2, nodes)
    w = np.full(nodes, 4.4 / nodes)
    a, b = numpy_kernels.hermite_pair(n, math.sqrt(n) * x)
    kdiag = n * (a * a + b * b) - math.sqrt(n) * math.sqrt(n) * x * a * b
    fx = np.tanh(x)
    edge = np.abs(x) >= 1.8
    return ((lambda mod: mod.kernel_square_sums(x, w, fx, a, b, kdiag, edge, 1e-6)),
            f"kernel_square_sums nodes={nodes}")


def case_eigen(n=200):
    mat = GueSampler(n, seed=1).matrix()

    def run(mod):
        d, e = mod.tridiagonalize(mat.copy())
        return mod.tql_eigenvalues(d, e, 50)[0]

    return run, f"tridiagonalize+QL n={n}"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    print(f"{'kernel':40s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for build in (case_hermite, case_kernel_square, case_eigen):
        run, label = build()
        t_np = best_of(lambda: run(numpy_kernels), args.repeat)
        t_nb = best_of(lambda: run(numba_kernels), args.repeat)
        r_np, r_nb = run(numpy_kernels), run(numba_kernels)
        diff = max(float(np.max(np.abs(np.asarray(u) - np.asarray(v))))
                   for u, v in zip(np.atleast_1d(r_np) if not isinstance(r_np, tuple) else r_np,
                                   np.atleast_1d(r_nb) if not isinstance(r_nb, tuple) else r_nb))
        print(f"{label:40s} {t_np:11.4f} {t_nb:11.4f} {t_np / t_nb:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
