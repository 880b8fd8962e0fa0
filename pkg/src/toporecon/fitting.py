"""Subdivision-surface fitting by least-squares progressive iterative approximation."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptySubset, ZeroWeight
from .mesh import SurfaceMesh
from .pointcloud import PointCloud
from .subdivision import SubdivisionBasis, loop_subdivide


def neighbor_subset(cloud: PointCloud, cycle_vertices: np.ndarray) -> tuple[PointCloud, float]:
    """Cloud points within ``d_avg`` of the nearest cycle vertex.

    ``d_avg`` is the mean, over cycle vertices, of the distance to the nearest
    *other* cloud point.  Returns the subset and ``d_avg``.
    """
    verts = np.asarray(cycle_vertices, dtype=float).reshape(-1, 3)
    if len(verts) == 0:
        raise ValueError("cycle has no vertices")
    if len(cloud) < 2:
        raise ValueError("cloud needs at least two points")
    tree = cKDTree(cloud.points)
    dist, _ = tree.query(verts, k=2)
    d_min = np.where(dist[:, 0] == 0.0, dist[:, 1], dist[:, 0])
    d_avg = float(d_min.mean())
    to_cycle, _ = cKDTree(verts).query(cloud.points, k=1)
    keep = np.flatnonzero(to_cycle <= d_avg)
    if len(keep) == 0:
        raise EmptySubset("no cloud point lies within d_avg of the cycle")
    return cloud.subset(keep), d_avg


def residuals(refined: np.ndarray, targets: np.ndarray):
    """Nearest refined vertex of each target and the difference vectors."""
    _, nearest = cKDTree(refined).query(targets, k=1)
    return nearest, targets - refined[nearest]


def rms(delta: np.ndarray) -> float:
    return math.sqrt(float(np.einsum("ij,ij->", delta, delta)) / len(delta))


def lspia_step(control: SurfaceMesh, basis: SubdivisionBasis,
               targets: PointCloud) -> tuple[SurfaceMesh, float]:
    """One LSPIA update; returns the new control mesh and the RMS before it.

    Each target's residual to its closest refined vertex is spread over the
    control vertices that define that refined vertex, in proportion to the
    subdivision weights, then averaged per control vertex.  Control vertices
    with no supporting target stay where they are.
    """
    pts = targets.points if isinstance(targets, PointCloud) else np.asarray(targets, float)
    if len(pts) == 0:
        raise EmptySubset("no target points")
    refined = basis.apply(control.vertices)
    nearest, delta = residuals(refined, pts)
    a = basis.matrix[nearest]
    weight = np.asarray(a.sum(axis=0)).ravel()
    numer = a.T @ delta
    moved = weight > 0
    step = np.zeros_like(control.vertices)
    step[moved] = numer[moved] / weight[moved, None]
    n_frozen = int((~moved).sum())
    if n_frozen:
        warnings.warn(f"{n_frozen} control vertices had no target support",
                      ZeroWeight, stacklevel=2)
    new = SurfaceMesh(control.vertices + step, control.faces, control.source_ids)
    return new, rms(delta)


@dataclass
class FitReport:
    iterations: int
    rms_history: list[float]
    converged: bool
    final_control: SurfaceMesh
    refined: SurfaceMesh = field(repr=False, default=None)
    frozen_steps: int = 0


def _settled(prev: float, cur: float, eps: float) -> bool:
    if prev == 0.0:
        return True
    return abs(cur / prev - 1.0) < eps


def fit(control: SurfaceMesh, targets: PointCloud, levels: int = 2,
        eps: float = 1e-3, max_iters: int = 100) -> FitReport:
    """Iterate LSPIA until the relative RMS change drops below ``eps``."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    pts = targets.points if isinstance(targets, PointCloud) else np.asarray(targets, float)
    refined_mesh, basis = loop_subdivide(control, levels)
    history = [rms(residuals(basis.apply(control.vertices), pts)[1])]
    converged = False
    frozen = 0
    it = 0
    while it < max_iters:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ZeroWeight)
            control, _ = lspia_step(control, basis, pts)
        frozen += any(issubclass(w.category, ZeroWeight) for w in caught)
        it += 1
        history.append(rms(residuals(basis.apply(control.vertices), pts)[1]))
        if _settled(history[-2], history[-1], eps):
            converged = True
            break
    if frozen:
        warnings.warn(f"{frozen} of {it} iterations left unsupported control vertices "
                      "in place", ZeroWeight, stacklevel=2)
    refined = SurfaceMesh(basis.apply(control.vertices), refined_mesh.faces)
    return FitReport(it, history, converged, control, refined, frozen)
