"""Alpha filtration on top of the Delaunay complex.

Filtration values are alpha *radii* (not squared radii).  A simplex enters at
the radius of its smallest circumsphere when that sphere is empty of the
opposite vertices of its Delaunay cofaces; otherwise it is attached and enters
together with its earliest coface.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .delaunay import DelaunayComplex, delaunay3
from .pointcloud import PointCloud


class Filtration:
    """Simplices of dimension 0..3 in filtration order.

    Order is by ``(value, dim, vertex tuple)`` which places every face before
    its cofaces.  ``boundary(i)`` lists the ids of the codimension-1 faces of
    simplex ``i``, as positions in this order.
    """

    def __init__(self, vertices: list[tuple[int, ...]], values, *, points=None):
        values = np.asarray(values, dtype=float)
        if len(vertices) != len(values):
            raise ValueError("one value per simplex is required")
        order = sorted(range(len(vertices)),
                       key=lambda i: (values[i], len(vertices[i]), vertices[i]))
        self.simplices: list[tuple[int, ...]] = [tuple(vertices[i]) for i in order]
        self.values = values[order]
        self.dims = np.array([len(s) - 1 for s in self.simplices], dtype=np.int8)
        self.points = points
        self._index = {s: i for i, s in enumerate(self.simplices)}
        if len(self._index) != len(self.simplices):
            raise ValueError("duplicate simplex in filtration")
        indptr = [0]
        indices = []
        for i, s in enumerate(self.simplices):
            if list(s) != sorted(set(s)):
                raise ValueError(f"simplex {s} is not a strictly increasing tuple")
            if len(s) > 4:
                raise ValueError("simplices above dimension 3 are not supported")
            if len(s) > 1:
                try:
                    faces = sorted(self._index[f] for f in combinations(s, len(s) - 1))
                except KeyError:
                    raise ValueError(f"a face of {s} is missing from the filtration") from None
                if faces[-1] >= i:
                    raise ValueError(f"face of {s} does not precede it")
                indices.extend(faces)
            indptr.append(len(indices))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self._coface_ptr = None
        self._coface_idx = None

    @classmethod
    def from_complex(cls, simplices_by_value: dict) -> "Filtration":
        """Build from ``{vertex tuple: value}``; missing faces are an error."""
        verts = [tuple(sorted(s)) for s in simplices_by_value]
        vals = list(simplices_by_value.values())
        return cls(verts, vals)

    def __len__(self) -> int:
        return len(self.simplices)

    def boundary(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def index(self, simplex) -> int:
        return self._index[tuple(sorted(simplex))]

    def ids_of_dim(self, dim: int) -> np.ndarray:
        return np.flatnonzero(self.dims == dim)

    def prefix_size(self, r: float) -> int:
        """Number of simplices with value <= r (they form a prefix)."""
        return int(np.searchsorted(self.values, r, side="right"))

    def cofaces(self, i: int) -> np.ndarray:
        """Ids of the codimension-1 cofaces of simplex ``i``, ascending."""
        if self._coface_ptr is None:
            cols = np.repeat(np.arange(len(self), dtype=np.int64),
                             np.diff(self.indptr))
            order = np.argsort(self.indices, kind="stable")
            counts = np.bincount(self.indices, minlength=len(self))
            self._coface_ptr = np.concatenate([[0], np.cumsum(counts)])
            self._coface_idx = cols[order]
        return self._coface_idx[self._coface_ptr[i]:self._coface_ptr[i + 1]]


def _keys(simplices: np.ndarray, n: int) -> np.ndarray:
    key = np.zeros(len(simplices), dtype=np.int64)
    for col in range(simplices.shape[1]):
        key = key * n + simplices[:, col]
    return key


def _lookup(sorted_keys: np.ndarray, query: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_keys, query)
    if np.any(pos >= len(sorted_keys)) or np.any(sorted_keys[pos] != query):
        raise ValueError("face missing from complex")
    return pos


def _tet_circumradius(p: np.ndarray, tets: np.ndarray) -> np.ndarray:
    a = p[tets[:, 0]]
    m = p[tets[:, 1:]] - a[:, None, :]
    rhs = 0.5 * np.einsum("tij,tij->ti", m, m)
    center = np.linalg.solve(m, rhs[..., None])[..., 0]
    return np.linalg.norm(center, axis=1)


def _tri_circumsphere(p: np.ndarray, tris: np.ndarray):
    a = p[tris[:, 0]]
    u = p[tris[:, 1]] - a
    v = p[tris[:, 2]] - a
    w = np.cross(u, v)
    uu = np.einsum("ij,ij->i", u, u)
    vv = np.einsum("ij,ij->i", v, v)
    ww = np.einsum("ij,ij->i", w, w)
    off = np.cross(uu[:, None] * v - vv[:, None] * u, w) / (2.0 * ww[:, None])
    return a + off, np.linalg.norm(off, axis=1)


def alpha_values(dc: DelaunayComplex) -> Filtration:
    """Alpha radius of every Delaunay simplex, as a :class:`Filtration`."""
    p = dc.points
    n = dc.n_vertices
    tets, tris, edges = dc.tetrahedra, dc.triangles, dc.edges
    tri_keys = _keys(tris, n)
    edge_keys = _keys(edges, n)

    tet_val = _tet_circumradius(p, tets) if len(tets) else np.zeros(0)

    tri_center, tri_rad = _tri_circumsphere(p, tris)
    tri_cof_min = np.full(len(tris), np.inf)
    tri_attached = np.zeros(len(tris), dtype=bool)
    for k in range(4):
        face_cols = [c for c in range(4) if c != k]
        fid = _lookup(tri_keys, _keys(tets[:, face_cols], n))
        np.minimum.at(tri_cof_min, fid, tet_val)
        opp = p[tets[:, k]]
        inside = np.linalg.norm(opp - tri_center[fid], axis=1) < tri_rad[fid]
        tri_attached[fid[inside]] = True
    tri_val = np.where(tri_attached, tri_cof_min, tri_rad)
    tri_val = np.minimum(tri_val, tri_cof_min)

    mid = 0.5 * (p[edges[:, 0]] + p[edges[:, 1]])
    half = 0.5 * np.linalg.norm(p[edges[:, 1]] - p[edges[:, 0]], axis=1)
    edge_cof_min = np.full(len(edges), np.inf)
    edge_attached = np.zeros(len(edges), dtype=bool)
    for k in range(3):
        face_cols = [c for c in range(3) if c != k]
        eid = _lookup(edge_keys, _keys(tris[:, face_cols], n))
        np.minimum.at(edge_cof_min, eid, tri_val)
        opp = p[tris[:, k]]
        inside = np.linalg.norm(opp - mid[eid], axis=1) < half[eid]
        edge_attached[eid[inside]] = True
    edge_val = np.where(edge_attached, edge_cof_min, half)
    edge_val = np.minimum(edge_val, edge_cof_min)

    verts = [(i,) for i in range(n)]
    verts += [tuple(map(int, s)) for s in edges]
    verts += [tuple(map(int, s)) for s in tris]
    verts += [tuple(map(int, s)) for s in tets]
    vals = np.concatenate([np.zeros(n), edge_val, tri_val, tet_val])
    return Filtration(verts, vals, points=p)


def alpha_filtration(cloud: PointCloud | np.ndarray, seed: int = 0) -> Filtration:
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, float)
    return alpha_values(delaunay3(pts, seed=seed))
