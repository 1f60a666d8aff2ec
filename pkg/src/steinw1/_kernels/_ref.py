"""Pure-Python reference kernels.

Semantics must match ``_fast.pyx`` exactly; the compiled module is the
default at import time and this module is the fallback (and the baseline
for ``benchmarks/bench_kernels.py``).
"""

import numpy as np


def bespoke_pi(x, p, w, s):
    """Forward recurrence for the bespoke weight sequence.

    Runs pi[0] = 1 and

        pi[i] * w[i] * p[i] = pi[i-1]*w[i-1]*p[i-1] + w[i]*p[i]
                              - (x[i]-x[i-1]) * sum_{j<i} s[j]*p[j]

    with Kahan-compensated running sums (the telescoping sum is prone to
    cancellation on long supports).
    """
    x = np.ascontiguousarray(x, dtype=float)
    p = np.ascontiguousarray(p, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    s = np.ascontiguousarray(s, dtype=float)
    n = x.shape[0]
    pi = np.empty(n)

    # w*p may vanish at atom 0 (e.g. a kernel weight at a support endpoint);
    # the first weight is 1 by definition and its coefficient never enters.
    v0 = w[0] * p[0]
    pi[0] = 1.0
    t_sum = v0  # running pi[i]*w[i]*p[i]
    t_c = 0.0
    u_sum = 0.0  # running sum of s[j]*p[j], j < i
    u_c = 0.0
    for i in range(1, n):
        y = s[i - 1] * p[i - 1] - u_c
        t = u_sum + y
        u_c = (t - u_sum) - y
        u_sum = t

        vi = w[i] * p[i]
        if vi == 0.0:
            raise ZeroDivisionError(f"w*p vanishes at atom {i}")
        inc = vi - (x[i] - x[i - 1]) * u_sum
        y = inc - t_c
        t = t_sum + y
        t_c = (t - t_sum) - y
        t_sum = t

        pi[i] = t_sum / vi
    return pi


def delta_t_wp(x, p, w, pi):
    """Rows of (Delta^pi)^t applied to the vector w*p (finite-support form).

    Row j is the tridiagonal stencil

        pi[j-1]*v[j-1]/d[j] + ((1-pi[j])/d[j] - pi[j]/d[j+1])*v[j]
            - (1-pi[j+1])*v[j+1]/d[j+1]

    with v = w*p, d[j] = x[j]-x[j-1], and the boundary conventions that
    the backward difference vanishes at atom 0 and the forward difference
    at the last atom.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(w, dtype=float) * np.asarray(p, dtype=float)
    pi = np.asarray(pi, dtype=float)
    n = x.shape[0]
    out = np.zeros(n)
    if n == 1:
        return out
    dm = np.diff(x)
    out[0] = -pi[0] * v[0] / dm[0] - (1.0 - pi[1]) * v[1] / dm[0]
    if n > 2:
        out[1:-1] = (
            pi[:-2] * v[:-2] / dm[:-1]
            + ((1.0 - pi[1:-1]) / dm[:-1] - pi[1:-1] / dm[1:]) * v[1:-1]
            - (1.0 - pi[2:]) * v[2:] / dm[1:]
        )
    out[n - 1] = pi[n - 2] * v[n - 2] / dm[n - 2] + (1.0 - pi[n - 1]) * v[n - 1] / dm[n - 2]
    return out
