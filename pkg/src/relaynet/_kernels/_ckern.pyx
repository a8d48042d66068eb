# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython implementations of the hot numeric kernels.

Semantics must stay bit-identical to ``_pykern.py``: same arithmetic
order, same first-minimum tie resolution, same canonical edge ordering.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


def mst_edges(xs, ys):
    """Prim MST on squared Euclidean weights; see _pykern.mst_edges."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    if n < 2:
        return (np.empty(0, np.int64), np.empty(0, np.int64),
                np.empty(0, np.float64))

    cdef cnp.ndarray[cnp.uint8_t, ndim=1] in_tree = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_d = np.full(n, np.inf)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] best_src = np.zeros(n, dtype=np.int64)

    cdef cnp.ndarray[cnp.int64_t, ndim=1] eu = np.empty(n - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ev = np.empty(n - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] el = np.empty(n - 1, dtype=np.float64)

    cdef Py_ssize_t k = 0, i, j, step, nxt
    cdef double dx, dy, d2, mn
    cdef long src
    in_tree[0] = 1

    for step in range(n - 1):
        for j in range(n):
            if in_tree[j]:
                continue
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            d2 = dx * dx + dy * dy
            if d2 < best_d[j]:
                best_d[j] = d2
                best_src[j] = k

        mn = np.inf
        nxt = -1
        for j in range(n):
            if not in_tree[j] and best_d[j] < mn:
                mn = best_d[j]
                nxt = j
        k = nxt
        in_tree[k] = 1
        src = best_src[k]
        if src < k:
            eu[step] = src
            ev[step] = k
        else:
            eu[step] = k
            ev[step] = src
        el[step] = sqrt(best_d[k])

    order = np.lexsort((ev, eu))
    return eu[order], ev[order], el[order]


def longest_incident(n, us, vs, lengths):
    """Per-node maximum incident edge length (0.0 for isolated nodes)."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] u = np.ascontiguousarray(us, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] v = np.ascontiguousarray(vs, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(lengths, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] radii = np.zeros(int(n), dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(u.shape[0]):
        if w[i] > radii[u[i]]:
            radii[u[i]] = w[i]
        if w[i] > radii[v[i]]:
            radii[v[i]] = w[i]
    return radii


def clearance_matrix(xs, ys, ox, oy, orad):
    """Point-to-obstacle-boundary distances; see _pykern.clearance_matrix."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cx = np.ascontiguousarray(ox, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cy = np.ascontiguousarray(oy, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cr = np.ascontiguousarray(orad, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], m = cx.shape[0], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, m), dtype=np.float64)
    cdef double dx, dy
    for j in range(n):
        for i in range(m):
            dx = x[j] - cx[i]
            dy = y[j] - cy[i]
            out[j, i] = sqrt(dx * dx + dy * dy) - cr[i]
    return out
