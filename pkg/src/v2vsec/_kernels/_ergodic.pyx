# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""C loops for the power-allocation kernels; see fallback.py for the math."""

from libc.math cimport log1p, sqrt

import numpy as np

DEF LN2 = 0.6931471805599453


def gamma_allocation(double[::1] a, double[::1] b, double mu):
    """Per-state optimal transmit power for the multiplier mu (nat scale)."""
    cdef Py_ssize_t i, n = a.shape[0]
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef double s, diff, disc
    for i in range(n):
        s = a[i] - b[i] - mu
        if s > 0.0:
            diff = a[i] - b[i]
            disc = mu * diff * (mu * diff + 4.0 * a[i] * b[i])
            out[i] = 2.0 * s / (sqrt(disc) + mu * (a[i] + b[i]))
    return out_arr


def secrecy_rate(double[::1] a, double[::1] b, double[::1] gamma):
    """Per-state secrecy rate log2(1 + gamma*a) - log2(1 + gamma*b)."""
    cdef Py_ssize_t i, n = a.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    for i in range(n):
        out[i] = (log1p(gamma[i] * a[i]) - log1p(gamma[i] * b[i])) / LN2
    return out_arr
