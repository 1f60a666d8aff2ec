"""Benchmark: compiled kernels vs the pure-Python fallback.

Times the weight recurrence and the transpose-stencil rows on synthetic
laws of increasing size and prints one table row per size. Run:

    python3 benchmarks/bench_kernels.py [max_exponent]
"""

import sys
import time

import numpy as np

from steinw1._kernels import _ref

try:
    from steinw1._kernels import _fast
except ImportError:
    _fast = None


def make_system(n, seed=0):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.random(n) * 0.01 + 1e-5)
    p = rng.random(n) + 0.1
    p /= p.sum()
    w = rng.random(n) + 0.5
    s = rng.standard_normal(n)
    return x, p, w, s


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    max_exp = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    sizes = [10**k for k in range(3, max_exp + 1)]
    print(f"{'atoms':>10s} {'kernel':>12s} {'python_ms':>12s} {'compiled_ms':>12s} {'speedup':>9s}")
    for n in sizes:
        x, p, w, s = make_system(n)
        t_py, pi_py = timeit(_ref.bespoke_pi, x, p, w, s, repeat=3 if n >= 10**6 else 5)
        if _fast is not None:
            t_c, pi_c = timeit(_fast.bespoke_pi, x, p, w, s)
            assert np.array_equal(pi_py, pi_c), "kernel implementations disagree"
            print(f"{n:>10d} {'recurrence':>12s} {t_py * 1e3:>12.3f} {t_c * 1e3:>12.3f} {t_py / t_c:>8.1f}x")
        else:
            print(f"{n:>10d} {'recurrence':>12s} {t_py * 1e3:>12.3f} {'-':>12s} {'-':>9s}")
        t_py, d_py = timeit(_ref.delta_t_wp, x, p, w, pi_py)
        if _fast is not None:
            t_c, d_c = timeit(_fast.delta_t_wp, x, p, w, pi_py)
            err = float(np.max(np.abs(d_py - d_c)))
            assert err <= 1e-12 * max(1.0, float(np.max(np.abs(d_py))))
            print(f"{n:>10d} {'rows':>12s} {t_py * 1e3:>12.3f} {t_c * 1e3:>12.3f} {t_py / t_c:>8.1f}x")
        else:
            print(f"{n:>10d} {'rows':>12s} {t_py * 1e3:>12.3f} {'-':>12s} {'-':>9s}")


if __name__ == "__main__":
    main()
