# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors herzmorrey._ref exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport pow

cnp.import_array()

BACKEND = "cython"


def maximal_scan_1d(edge_cum, absvals, double h, double sigma, double scale):
    """Exact discrete supremum of scale * r^-sigma * int_{B(x,r)} |f| per midpoint."""
    cdef double[::1] fe = np.ascontiguousarray(edge_cum, dtype=np.float64)
    cdef double[::1] av = np.ascontiguousarray(absvals, dtype=np.float64)
    cdef Py_ssize_t m = av.shape[0]
    out_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    # r^-sigma depends only on the candidate index; hoist it out of the scan
    rp_arr = (scale * ((np.arange(m + 1) + 0.5) * h) ** -sigma).astype(np.float64)
    cdef double[::1] rp = rp_arr
    cdef bint stationary = sigma < 1.0
    cdef Py_ssize_t i, t, right, left, ri, li
    cdef double g, r, ratio, best, b, a, r_next, r_star, phi

    for i in range(m):
        best = 0.0
        for t in range(m + 1):
            right = i + t + 1
            if right > m:
                right = m
            left = i - t
            if left < 0:
                left = 0
            g = fe[right] - fe[left]
            ratio = g * rp[t]
            if ratio > best:
                best = ratio
            if stationary and t < m:
                ri = i + t + 1
                li = i - t - 1
                b = 0.0
                if ri <= m - 1:
                    b += av[ri]
                if li >= 0:
                    b += av[li]
                if b > 0.0:
                    r = (t + 0.5) * h
                    a = g - b * r
                    if a > 0.0:
                        r_star = sigma * a / (b * (1.0 - sigma))
                        r_next = (t + 1.5) * h
                        if r_star > r and r_star < r_next:
                            phi = scale * (a + b * r_star) * pow(r_star, -sigma)
                            if phi > best:
                                best = phi
            if right == m and left == 0:
                # window covers everything; later radii only shrink the ratio
                break
        out[i] = best
    return out_arr
