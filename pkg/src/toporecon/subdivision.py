"""Loop subdivision of closed triangle meshes, tracked as a sparse basis.

Every refined vertex is an affine combination of the control vertices; the
combination weights for all refined vertices form a row-stochastic sparse
matrix (the *basis*), so refined positions are ``basis @ control``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import NotManifold
from .mesh import SurfaceMesh


def loop_beta(n: int) -> float:
    """Loop's weight for each of the ``n`` neighbours of an even vertex."""
    c = 3.0 / 8.0 + 0.25 * math.cos(2.0 * math.pi / n)
    return (5.0 / 8.0 - c * c) / n


@dataclass(frozen=True)
class SubdivisionBasis:
    matrix: sp.csr_matrix

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def row(self, j: int) -> list[tuple[int, float]]:
        m = self.matrix
        lo, hi = m.indptr[j], m.indptr[j + 1]
        return list(zip(m.indices[lo:hi].tolist(), m.data[lo:hi].tolist()))

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def apply(self, control: np.ndarray) -> np.ndarray:
        return self.matrix @ control


def _edge_table(faces: np.ndarray):
    """Unique edges, each with its two opposite vertices; faces' edge ids."""
    f = faces
    half = np.concatenate([f[:, [0, 1, 2]], f[:, [1, 2, 0]], f[:, [2, 0, 1]]])
    a = np.minimum(half[:, 0], half[:, 1])
    b = np.maximum(half[:, 0], half[:, 1])
    key = np.stack([a, b], axis=1)
    edges, inverse, counts = np.unique(key, axis=0, return_inverse=True,
                                       return_counts=True)
    inverse = inverse.reshape(-1)
    if np.any(counts != 2):
        raise NotManifold("Loop subdivision needs every edge shared by two faces")
    order = np.argsort(inverse, kind="stable")
    opposite = half[order, 2].reshape(-1, 2)
    face_edges = inverse.reshape(3, -1).T  # edges (0,1), (1,2), (2,0) per face
    return edges, opposite, face_edges


def subdivision_step(n_vertices: int, faces: np.ndarray):
    """One Loop level: (refinement matrix, refined faces)."""
    edges, opposite, face_edges = _edge_table(faces)
    n_edges = len(edges)
    rows, cols, vals = [], [], []

    # even (old) vertices
    nbr_a = np.concatenate([edges[:, 0], edges[:, 1]])
    nbr_b = np.concatenate([edges[:, 1], edges[:, 0]])
    valence = np.bincount(nbr_a, minlength=n_vertices)
    if np.any(valence[np.unique(faces)] < 3):
        raise NotManifold("vertex of valence < 3")
    beta = np.array([loop_beta(k) if k else 0.0 for k in valence])
    rows.append(np.arange(n_vertices))
    cols.append(np.arange(n_vertices))
    vals.append(1.0 - valence * beta)
    rows.append(nbr_a)
    cols.append(nbr_b)
    vals.append(beta[nbr_a])

    # odd (edge) vertices
    e_ids = n_vertices + np.arange(n_edges)
    for col, w in ((edges[:, 0], 3 / 8), (edges[:, 1], 3 / 8),
                   (opposite[:, 0], 1 / 8), (opposite[:, 1], 1 / 8)):
        rows.append(e_ids)
        cols.append(col)
        vals.append(np.full(n_edges, w))

    s = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n_vertices + n_edges, n_vertices))
    s.sum_duplicates()

    v0, v1, v2 = faces[:, 0], faces[:, 1], faces[:, 2]
    e01 = n_vertices + face_edges[:, 0]
    e12 = n_vertices + face_edges[:, 1]
    e20 = n_vertices + face_edges[:, 2]
    new_faces = np.concatenate([
        np.stack([v0, e01, e20], axis=1),
        np.stack([v1, e12, e01], axis=1),
        np.stack([v2, e20, e12], axis=1),
        np.stack([e01, e12, e20], axis=1),
    ])
    return s, new_faces


def loop_subdivide(control: SurfaceMesh, levels: int = 2) -> tuple[SurfaceMesh, SubdivisionBasis]:
    if levels < 0:
        raise ValueError("levels must be non-negative")
    if not control.is_closed_manifold():
        raise NotManifold("Loop subdivision needs a closed 2-manifold control mesh")
    n = control.n_vertices
    basis = sp.identity(n, format="csr")
    faces = control.faces
    for _ in range(levels):
        s, faces = subdivision_step(basis.shape[0], faces)
        basis = (s @ basis).tocsr()
    basis.sort_indices()
    refined = SurfaceMesh(basis @ control.vertices, faces)
    return refined, SubdivisionBasis(basis)
