"""Numpy implementations of the hot kernels.

Same contracts as the compiled module ``ultracloud._kernels``; selected by
``ultracloud.kernels`` when the extension is not built. The triple scans run
row-sliced, so they allocate O(P^2) temporaries instead of O(P^3).
"""

from __future__ import annotations

import math

import numpy as np


def pairwise_minkowski(points, alpha: float) -> np.ndarray:
    """Dimension-normalized Minkowski distances ((1/n) sum |dx|^a)^(1/a).

    ``alpha=inf`` gives the maximum coordinate difference. Summation within
    each pair is over ascending coordinate index.
    """
    x = np.ascontiguousarray(points, dtype=np.float64)
    n_pts, dim = x.shape
    out = np.zeros((n_pts, n_pts), dtype=np.float64)
    for i in range(n_pts - 1):
        diff = np.abs(x[i + 1 :] - x[i])
        if alpha == math.inf:
            row = diff.max(axis=1)
        elif alpha == 2.0:
            row = np.sqrt((diff * diff).sum(axis=1) / dim)
        elif alpha == 1.0:
            row = diff.sum(axis=1) / dim
        else:
            row = ((diff**alpha).sum(axis=1) / dim) ** (1.0 / alpha)
        out[i, i + 1 :] = row
        out[i + 1 :, i] = row
    return out


def triangle_degree_scan(dmat):
    """Scan all index triples i<j<k of a symmetric matrix.

    Returns (sum of degrees, min degree, argmin triple, max degree,
    argmax triple, triple count); the degree of an all-zero triangle is 1.
    """
    d = np.asarray(dmat, dtype=np.float64)
    n_pts = d.shape[0]
    total = 0.0
    count = 0
    mn = math.inf
    mx = -math.inf
    mn_t = None
    mx_t = None
    for a in range(n_pts - 2):
        row = d[a, a + 1 :]
        sub = d[a + 1 :, a + 1 :]
        iu, ju = np.triu_indices(n_pts - a - 1, 1)
        if iu.size == 0:
            continue
        s1, s2, s3 = row[iu], row[ju], sub[iu, ju]
        hi = np.maximum(np.maximum(s1, s2), s3)
        # median by selection, exact in floating point
        mid = np.maximum(np.minimum(s1, s2), np.minimum(np.maximum(s1, s2), s3))
        u = np.where(hi > 0.0, 2.0 * mid / np.where(hi > 0.0, hi, 1.0) - 1.0, 1.0)
        total += float(u.sum())
        count += u.size
        lo_i = int(np.argmin(u))
        hi_i = int(np.argmax(u))
        if u[lo_i] < mn:
            mn = float(u[lo_i])
            mn_t = (a, a + 1 + int(iu[lo_i]), a + 1 + int(ju[lo_i]))
        if u[hi_i] > mx:
            mx = float(u[hi_i])
            mx_t = (a, a + 1 + int(iu[hi_i]), a + 1 + int(ju[hi_i]))
    return total, mn, mn_t, mx, mx_t, count


def strong_triangle_scan(dmat, tol: float):
    """Worst strong-triangle deficit max_side - mid_side over triples i<j<k.

    Returns (worst deficit, its triple, count of deficits > tol, triple
    count). Deficit <= 0 everywhere means the matrix is ultrametric.
    """
    d = np.asarray(dmat, dtype=np.float64)
    n_pts = d.shape[0]
    worst = -math.inf
    worst_t = None
    violations = 0
    count = 0
    for a in range(n_pts - 2):
        row = d[a, a + 1 :]
        sub = d[a + 1 :, a + 1 :]
        iu, ju = np.triu_indices(n_pts - a - 1, 1)
        if iu.size == 0:
            continue
        s1, s2, s3 = row[iu], row[ju], sub[iu, ju]
        hi = np.maximum(np.maximum(s1, s2), s3)
        mid = np.maximum(np.minimum(s1, s2), np.minimum(np.maximum(s1, s2), s3))
        deficit = hi - mid
        violations += int((deficit > tol).sum())
        count += deficit.size
        hi_i = int(np.argmax(deficit))
        if deficit[hi_i] > worst:
            worst = float(deficit[hi_i])
            worst_t = (a, a + 1 + int(iu[hi_i]), a + 1 + int(ju[hi_i]))
    return worst, worst_t, violations, count


def metric_triangle_scan(dmat):
    """Worst ordered-triple deficit d[a,b] - d[a,c] - d[c,b].

    Handles asymmetric input. Returns (worst deficit, (a, b, c)); worst is
    -inf with triple None when there are fewer than 3 points.
    """
    d = np.asarray(dmat, dtype=np.float64)
    n_pts = d.shape[0]
    worst = -math.inf
    worst_t = None
    for c in range(n_pts):
        m = d - d[:, c][:, None] - d[c, :][None, :]
        m[c, :] = -math.inf
        m[:, c] = -math.inf
        np.fill_diagonal(m, -math.inf)
        flat = int(np.argmax(m))
        a, b = divmod(flat, n_pts)
        if m[a, b] > worst:
            worst = float(m[a, b])
            worst_t = (a, b, c)
    return worst, worst_t


def minimax_closure(dmat) -> np.ndarray:
    """All-pairs minimax path cost: Floyd pass over the (min, max) semiring."""
    out = np.array(dmat, dtype=np.float64, copy=True)
    n_pts = out.shape[0]
    for k in range(n_pts):
        np.minimum(out, np.maximum.outer(out[:, k], out[k, :]), out=out)
    return out
