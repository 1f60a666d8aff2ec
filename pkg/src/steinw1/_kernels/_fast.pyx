# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops.

Must stay semantically identical to ``_ref.py`` (same expression order,
same compensation scheme); the test suite asserts agreement.
"""

import numpy as np


def bespoke_pi(x_in, p_in, w_in, s_in):
    """Forward weight recurrence with Kahan-compensated running sums."""
    x_arr = np.ascontiguousarray(x_in, dtype=np.float64)
    p_arr = np.ascontiguousarray(p_in, dtype=np.float64)
    w_arr = np.ascontiguousarray(w_in, dtype=np.float64)
    s_arr = np.ascontiguousarray(s_in, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] p = p_arr
    cdef double[::1] w = w_arr
    cdef double[::1] s = s_arr
    cdef Py_ssize_t n = x.shape[0]
    pi_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] pi = pi_arr

    # w*p may vanish at atom 0 (removable: the first weight is 1 by definition)
    cdef double v0 = w[0] * p[0]
    pi[0] = 1.0
    cdef double t_sum = v0
    cdef double t_c = 0.0
    cdef double u_sum = 0.0
    cdef double u_c = 0.0
    cdef double y, t, vi, inc
    cdef Py_ssize_t i
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
    return pi_arr


def delta_t_wp(x_in, p_in, w_in, pi_in):
    """Rows of (Delta^pi)^t (w p), finite-support boundary conventions."""
    x_arr = np.ascontiguousarray(x_in, dtype=np.float64)
    v_arr = np.ascontiguousarray(w_in, dtype=np.float64) * np.ascontiguousarray(p_in, dtype=np.float64)
    pi_arr = np.ascontiguousarray(pi_in, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] v = v_arr
    cdef double[::1] pi = pi_arr
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    if n == 1:
        return out_arr
    cdef double dl, dr
    cdef Py_ssize_t j
    dl = x[1] - x[0]
    out[0] = -pi[0] * v[0] / dl - (1.0 - pi[1]) * v[1] / dl
    for j in range(1, n - 1):
        dl = x[j] - x[j - 1]
        dr = x[j + 1] - x[j]
        out[j] = (
            pi[j - 1] * v[j - 1] / dl
            + ((1.0 - pi[j]) / dl - pi[j] / dr) * v[j]
            - (1.0 - pi[j + 1]) * v[j + 1] / dr
        )
    dl = x[n - 1] - x[n - 2]
    out[n - 1] = pi[n - 2] * v[n - 2] / dl + (1.0 - pi[n - 1]) * v[n - 1] / dl
    return out_arr
