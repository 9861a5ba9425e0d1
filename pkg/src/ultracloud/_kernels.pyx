# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: pairwise Minkowski distances, triangle scans, and
the minimax path closure. Contracts mirror ``ultracloud._fallback``."""

import numpy as np

from libc.math cimport INFINITY, fabs, pow, sqrt


cdef inline double _max3(double a, double b, double c) noexcept nogil:
    cdef double hi = a
    if b > hi:
        hi = b
    if c > hi:
        hi = c
    return hi


cdef inline double _mid3(double a, double b, double c) noexcept nogil:
    # median by selection, exact in floating point
    cdef double lo_ab = a if a < b else b
    cdef double hi_ab = a if a > b else b
    cdef double m = hi_ab if hi_ab < c else c
    return lo_ab if lo_ab > m else m


def pairwise_minkowski(object points, double alpha):
    """Dimension-normalized Minkowski distances, ascending-index summation."""
    cdef double[:, ::1] x = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n_pts = x.shape[0], dim = x.shape[1]
    out_arr = np.zeros((n_pts, n_pts), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, t
    cdef double acc, dv, dist
    for i in range(n_pts - 1):
        for j in range(i + 1, n_pts):
            if alpha == INFINITY:
                acc = 0.0
                for t in range(dim):
                    dv = fabs(x[i, t] - x[j, t])
                    if dv > acc:
                        acc = dv
                dist = acc
            elif alpha == 2.0:
                acc = 0.0
                for t in range(dim):
                    dv = x[i, t] - x[j, t]
                    acc += dv * dv
                dist = sqrt(acc / dim)
            elif alpha == 1.0:
                acc = 0.0
                for t in range(dim):
                    acc += fabs(x[i, t] - x[j, t])
                dist = acc / dim
            else:
                acc = 0.0
                for t in range(dim):
                    acc += pow(fabs(x[i, t] - x[j, t]), alpha)
                dist = pow(acc / dim, 1.0 / alpha)
            out[i, j] = dist
            out[j, i] = dist
    return out_arr


def triangle_degree_scan(object dmat):
    """(sum of degrees, min, argmin triple, max, argmax triple, count)."""
    cdef double[:, ::1] d = np.ascontiguousarray(dmat, dtype=np.float64)
    cdef Py_ssize_t n_pts = d.shape[0]
    cdef Py_ssize_t a, b, c
    cdef double s1, s2, s3, hi, mid, u
    cdef double total = 0.0, mn = INFINITY, mx = -INFINITY
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t mn_a = -1, mn_b = -1, mn_c = -1, mx_a = -1, mx_b = -1, mx_c = -1
    for a in range(n_pts - 2):
        for b in range(a + 1, n_pts - 1):
            s1 = d[a, b]
            for c in range(b + 1, n_pts):
                s2 = d[a, c]
                s3 = d[b, c]
                hi = _max3(s1, s2, s3)
                mid = _mid3(s1, s2, s3)
                u = 1.0 if hi == 0.0 else 2.0 * mid / hi - 1.0
                total += u
                count += 1
                if u < mn:
                    mn = u
                    mn_a, mn_b, mn_c = a, b, c
                if u > mx:
                    mx = u
                    mx_a, mx_b, mx_c = a, b, c
    mn_t = (mn_a, mn_b, mn_c) if count else None
    mx_t = (mx_a, mx_b, mx_c) if count else None
    return total, mn, mn_t, mx, mx_t, count


def strong_triangle_scan(object dmat, double tol):
    """(worst max-mid deficit, its triple, violations > tol, triple count)."""
    cdef double[:, ::1] d = np.ascontiguousarray(dmat, dtype=np.float64)
    cdef Py_ssize_t n_pts = d.shape[0]
    cdef Py_ssize_t a, b, c
    cdef double s1, s2, s3, deficit
    cdef double worst = -INFINITY
    cdef Py_ssize_t count = 0, violations = 0
    cdef Py_ssize_t w_a = -1, w_b = -1, w_c = -1
    for a in range(n_pts - 2):
        for b in range(a + 1, n_pts - 1):
            s1 = d[a, b]
            for c in range(b + 1, n_pts):
                s2 = d[a, c]
                s3 = d[b, c]
                deficit = _max3(s1, s2, s3) - _mid3(s1, s2, s3)
                count += 1
                if deficit > tol:
                    violations += 1
                if deficit > worst:
                    worst = deficit
                    w_a, w_b, w_c = a, b, c
    worst_t = (w_a, w_b, w_c) if count else None
    return worst, worst_t, violations, count


def metric_triangle_scan(object dmat):
    """Worst ordered-triple deficit d[a,b] - d[a,c] - d[c,b]; handles
    asymmetric input."""
    cdef double[:, ::1] d = np.ascontiguousarray(dmat, dtype=np.float64)
    cdef Py_ssize_t n_pts = d.shape[0]
    cdef Py_ssize_t a, b, c
    cdef double deficit
    cdef double worst = -INFINITY
    cdef Py_ssize_t w_a = -1, w_b = -1, w_c = -1
    for a in range(n_pts):
        for b in range(n_pts):
            if b == a:
                continue
            for c in range(n_pts):
                if c == a or c == b:
                    continue
                deficit = d[a, b] - d[a, c] - d[c, b]
                if deficit > worst:
                    worst = deficit
                    w_a, w_b, w_c = a, b, c
    worst_t = (w_a, w_b, w_c) if w_a >= 0 else None
    return worst, worst_t


def minimax_closure(object dmat):
    """All-pairs minimax path cost: Floyd pass over the (min, max) semiring."""
    out_arr = np.array(dmat, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] o = out_arr
    cdef Py_ssize_t n_pts = o.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double dik, v
    for k in range(n_pts):
        for i in range(n_pts):
            dik = o[i, k]
            for j in range(n_pts):
                v = dik if dik > o[k, j] else o[k, j]
                if v < o[i, j]:
                    o[i, j] = v
    return out_arr
