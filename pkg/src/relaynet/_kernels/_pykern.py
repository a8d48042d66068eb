"""NumPy implementations of the hot numeric kernels.

These are the reference semantics for the compiled Cython twin in
``_ckern.pyx``; both backends must produce bit-identical output. The
operations kept here are the ones executed once per optimizer step, which
is where virtually all run time goes for large relay counts.
"""

import numpy as np

BACKEND = "python"


def mst_edges(xs, ys):
    """Minimum spanning tree of a planar point set.

    Weights are squared Euclidean distances (same tree as Euclidean, since
    the transform is monotone). Prim's algorithm grows from node 0 and ties
    are resolved toward the smallest node index, so the result is fully
    deterministic. Returns ``(us, vs, lengths)`` with ``us[i] < vs[i]``,
    rows sorted by ``(u, v)``; lengths are Euclidean.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    n = xs.shape[0]
    if n < 2:
        return (np.empty(0, np.int64), np.empty(0, np.int64),
                np.empty(0, np.float64))

    in_tree = np.zeros(n, dtype=bool)
    best_d = np.full(n, np.inf)
    best_src = np.zeros(n, dtype=np.int64)
    in_tree[0] = True

    edges = []
    k = 0
    for _ in range(n - 1):
        dx = xs - xs[k]
        dy = ys - ys[k]
        d2 = dx * dx + dy * dy
        improved = (d2 < best_d) & ~in_tree
        best_d[improved] = d2[improved]
        best_src[improved] = k

        key = np.where(in_tree, np.inf, best_d)
        k = int(np.argmin(key))
        in_tree[k] = True
        src = int(best_src[k])
        length = float(np.sqrt(best_d[k]))
        u, v = (src, k) if src < k else (k, src)
        edges.append((u, v, length))

    edges.sort(key=lambda e: (e[0], e[1]))
    us = np.array([e[0] for e in edges], dtype=np.int64)
    vs = np.array([e[1] for e in edges], dtype=np.int64)
    lengths = np.array([e[2] for e in edges], dtype=np.float64)
    return us, vs, lengths


def longest_incident(n, us, vs, lengths):
    """Per-node maximum incident edge length (0.0 for isolated nodes)."""
    radii = np.zeros(int(n), dtype=np.float64)
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.float64)
    for i in range(us.shape[0]):
        w = lengths[i]
        u = us[i]
        v = vs[i]
        if w > radii[u]:
            radii[u] = w
        if w > radii[v]:
            radii[v] = w
    return radii


def clearance_matrix(xs, ys, ox, oy, orad):
    """Distance from each point to each obstacle boundary.

    Entry (j, i) is ``|P_j - O_i| - R_i``; negative when the point lies
    inside obstacle i. Shape (n_points, n_obstacles).
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    ox = np.ascontiguousarray(ox, dtype=np.float64)
    oy = np.ascontiguousarray(oy, dtype=np.float64)
    orad = np.ascontiguousarray(orad, dtype=np.float64)
    if ox.shape[0] == 0:
        return np.empty((xs.shape[0], 0), dtype=np.float64)
    dx = xs[:, None] - ox[None, :]
    dy = ys[:, None] - oy[None, :]
    return np.sqrt(dx * dx + dy * dy) - orad[None, :]
