"""Pure-Python versions of the hot kernels (used when the extension is absent)."""
from __future__ import annotations

import numpy as np


def reduce_boundary(indptr, indices, dims):
    """Z2 column reduction with clearing, highest dimension first.

    Returns ``low`` where ``low[j]`` is the pivot row of reduced column ``j``
    or -1 when the column reduces to zero.
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    dims = np.asarray(dims)
    n = len(dims)
    low = np.full(n, -1, dtype=np.int64)
    pivot_col: dict[int, int] = {}
    reduced: dict[int, set] = {}
    cleared = np.zeros(n, dtype=bool)
    ptr = indptr.tolist()
    idx = indices.tolist()
    for d in range(int(dims.max(initial=0)), 0, -1):
        for j in np.flatnonzero(dims == d).tolist():
            if cleared[j]:
                continue
            col = set(idx[ptr[j]:ptr[j + 1]])
            while col:
                k = pivot_col.get(max(col))
                if k is None:
                    break
                col ^= reduced[k]
            if col:
                pivot = max(col)
                pivot_col[pivot] = j
                reduced[j] = col
                low[j] = pivot
                cleared[pivot] = True
    return low


def delaunay_tets(points, order, first, seed, pred):
    """Solid tetrahedra (rows of sorted vertex ids) of the Delaunay triangulation."""
    from .delaunay import _Triangulation

    tri = _Triangulation(pred, first, seed=seed)
    for p in order:
        tri.insert(int(p))
    return np.array(tri.solid_tetrahedra(), dtype=np.int64).reshape(-1, 4)
