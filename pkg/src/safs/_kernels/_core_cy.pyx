# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the tree-split scan and the lasso sweep.

Mirrors _core_py exactly (same scan order, same tie-breaking) so the two
backends produce identical fits.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def best_split(double[:, ::1] X, double[::1] y, long[::1] idx, long[::1] cand, long min_leaf):
    cdef Py_ssize_t nn = idx.shape[0]
    cdef Py_ssize_t nc = cand.shape[0]
    cdef long best_f = -1
    cdef double best_t = 0.0
    cdef double best_score = 0.0
    if nn < 2 * min_leaf:
        return -1, 0.0, 0.0

    cdef cnp.ndarray[double, ndim=1] v = np.empty(nn, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] yn = np.empty(nn, dtype=np.float64)
    cdef double[::1] vv = v
    cdef double[::1] yv = yn
    cdef Py_ssize_t i, k, f
    for i in range(nn):
        yv[i] = y[idx[i]]

    cdef cnp.ndarray[long, ndim=1] order
    cdef long[::1] ov
    cdef double sv_i, sv_n, total, total2, parent_sse, pre, pre2, lsse, rsse, rs, score
    cdef cnp.ndarray[double, ndim=1] sv = np.empty(nn, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] sy = np.empty(nn, dtype=np.float64)
    cdef double[::1] svv = sv
    cdef double[::1] syv = sy
    cdef Py_ssize_t lo = min_leaf - 1
    cdef Py_ssize_t hi = nn - min_leaf
    cdef Py_ssize_t nl, nr

    for k in range(nc):
        f = cand[k]
        for i in range(nn):
            vv[i] = X[idx[i], f]
        order = np.argsort(v, kind="stable").astype(np.int64, copy=False)
        ov = order
        for i in range(nn):
            svv[i] = vv[ov[i]]
            syv[i] = yv[ov[i]]
        total = 0.0
        total2 = 0.0
        for i in range(nn):
            total += syv[i]
            total2 += syv[i] * syv[i]
        parent_sse = total2 - total * total / nn
        pre = 0.0
        pre2 = 0.0
        for i in range(hi):
            pre += syv[i]
            pre2 += syv[i] * syv[i]
            if i < lo:
                continue
            if svv[i] >= svv[i + 1]:
                continue
            nl = i + 1
            nr = nn - nl
            lsse = pre2 - pre * pre / nl
            rs = total - pre
            rsse = (total2 - pre2) - rs * rs / nr
            score = parent_sse - lsse - rsse
            if score > best_score:
                best_score = score
                best_f = f
                best_t = (svv[i] + svv[i + 1]) / 2.0
    return best_f, best_t, best_score


def cd_sweep(double[::1, :] Xs, double[::1] resid, double[::1] beta, double lam, long[::1] active):
    cdef Py_ssize_t m = Xs.shape[0]
    cdef Py_ssize_t na = active.shape[0]
    cdef Py_ssize_t i, k, j
    cdef double rho, bj, bnew, delta, diff
    cdef double max_delta = 0.0
    for k in range(na):
        j = active[k]
        bj = beta[j]
        rho = 0.0
        for i in range(m):
            rho += Xs[i, j] * resid[i]
        rho = rho / m + bj
        if rho > lam:
            bnew = rho - lam
        elif rho < -lam:
            bnew = rho + lam
        else:
            bnew = 0.0
        if bnew != bj:
            diff = bnew - bj
            for i in range(m):
                resid[i] -= Xs[i, j] * diff
            beta[j] = bnew
            delta = diff if diff > 0 else -diff
            if delta > max_delta:
                max_delta = delta
    return max_delta
