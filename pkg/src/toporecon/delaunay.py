"""3D Delaunay triangulation by incremental cavity insertion.

The hull is closed off with "ghost" tetrahedra that share a vertex at
infinity (``INF``), so that points outside the current hull are inserted by
the same cavity mechanism as interior ones.  All decisions go through the
filtered exact predicates; cospherical ties are resolved by the symbolic
perturbation keyed on point index, which makes the result a unique function
of the (deduplicated, indexed) input.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._accel import kernels
from .errors import DegenerateInput
from .predicates import Predicates

INF = -1


@dataclass(frozen=True)
class DelaunayComplex:
    """All simplices of a Delaunay triangulation, as sorted vertex tuples."""
    points: np.ndarray
    tetrahedra: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray
    n_vertices: int

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.n_vertices, len(self.edges), len(self.triangles),
                len(self.tetrahedra))


def _initial_simplex(pred: Predicates) -> tuple[int, int, int, int]:
    pts = pred.points
    n = len(pts)
    if n < 4:
        raise DegenerateInput(f"need at least 4 points, got {n}")
    i0 = 0
    i1 = 1
    ex = pred.exact
    a, b = ex[i0], ex[i1]
    i2 = None
    for k in range(2, n):
        c = ex[k]
        u = (b[0] - a[0], b[1] - a[1], b[2] - a[2])
        v = (c[0] - a[0], c[1] - a[1], c[2] - a[2])
        cross = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                 u[0] * v[1] - u[1] * v[0])
        if any(cross):
            i2 = k
            break
    if i2 is None:
        raise DegenerateInput("all points are collinear")
    for k in range(i2 + 1, n):
        if k == i2:
            continue
        if pred.orient(i0, i1, i2, k) != 0:
            return i0, i1, i2, k
    raise DegenerateInput("all points are coplanar")


def _morton_keys(points: np.ndarray, bits: int = 10) -> np.ndarray:
    lo = points.min(axis=0)
    span = np.ptp(points, axis=0)
    span[span == 0] = 1.0
    q = ((points - lo) / span * ((1 << bits) - 1)).astype(np.int64)
    key = np.zeros(len(points), dtype=np.int64)
    for b in range(bits):
        for axis in range(3):
            key |= ((q[:, axis] >> b) & 1) << (3 * b + axis)
    return key


def insertion_order(points: np.ndarray, first: tuple, seed: int = 0) -> list[int]:
    """Biased randomized insertion order: random rounds, each Morton-sorted."""
    n = len(points)
    rest = np.array([i for i in range(n) if i not in set(first)], dtype=np.int64)
    rng = np.random.default_rng(seed)
    rest = rest[rng.permutation(len(rest))]
    rounds = []
    while len(rest) > 64:
        half = len(rest) // 2
        rounds.append(rest[half:])
        rest = rest[:half]
    rounds.append(rest)
    keys = _morton_keys(points)
    order: list[int] = []
    for chunk in reversed(rounds):
        order.extend(int(i) for i in chunk[np.argsort(keys[chunk], kind="stable")])
    return order


class _Triangulation:
    """Mutable tetrahedral mesh with neighbour links used during insertion.

    ``tv[t]`` holds the four vertices of tet ``t`` (positively oriented when
    ``INF`` is replaced by a point beyond the hull face); ``tn[t][i]`` is the
    tet across the face opposite ``tv[t][i]``.
    """

    def __init__(self, pred: Predicates, first, seed: int = 0):
        self.pred = pred
        self.tv: list[list[int]] = []
        self.tn: list[list[int]] = []
        self.alive: list[bool] = []
        self.free: list[int] = []
        self.rng = random.Random(seed)
        a, b, c, d = first
        if pred.orient(a, b, c, d) < 0:
            b, c = c, b
        t0 = self._new([a, b, c, d])
        ghosts = []
        for i in range(4):
            gv = [a, b, c, d]
            gv[i] = INF
            # flip so that INF sits on the far side of the face
            j, k = [x for x in range(4) if x != i][:2]
            gv[j], gv[k] = gv[k], gv[j]
            ghosts.append(self._new(gv))
        for i in range(4):
            g = ghosts[i]
            self.tn[t0][i] = g
            gi = self.tv[g].index(INF)
            self.tn[g][gi] = t0
        # ghost-ghost adjacency across faces that contain INF
        self._link_by_faces(ghosts)
        self.last = t0

    def _new(self, verts: list[int]) -> int:
        if self.free:
            t = self.free.pop()
            self.tv[t] = verts
            self.tn[t] = [-1, -1, -1, -1]
            self.alive[t] = True
            return t
        self.tv.append(verts)
        self.tn.append([-1, -1, -1, -1])
        self.alive.append(True)
        return len(self.tv) - 1

    def _link_by_faces(self, tets: list[int]) -> None:
        faces = {}
        for t in tets:
            v = self.tv[t]
            for i in range(4):
                if self.tn[t][i] != -1:
                    continue
                key = frozenset(v[:i] + v[i + 1:])
                other = faces.pop(key, None)
                if other is None:
                    faces[key] = (t, i)
                else:
                    u, j = other
                    self.tn[t][i] = u
                    self.tn[u][j] = t

    def _conflict(self, t: int, p: int, cache: dict) -> bool:
        hit = cache.get(t)
        if hit is not None:
            return hit
        v = self.tv[t]
        pred = self.pred
        if INF in v:
            k = v.index(INF)
            w = list(v)
            w[k] = p
            o = pred.orient(*w)
            if o != 0:
                res = o > 0
            else:
                # p is coplanar with the hull face: defer to the solid tet
                res = self._conflict(self.tn[t][k], p, cache)
        else:
            res = pred.insphere(v[0], v[1], v[2], v[3], p) > 0
        cache[t] = res
        return res

    def _locate(self, p: int) -> int:
        pred = self.pred
        t = self.last
        if not self.alive[t] or INF in self.tv[t]:
            t = next(i for i, v in enumerate(self.tv)
                     if self.alive[i] and INF not in v)
        order = [0, 1, 2, 3]
        for _ in range(10 * len(self.tv) + 100):
            v = self.tv[t]
            if INF in v:
                return t
            self.rng.shuffle(order)
            moved = False
            for i in order:
                w = list(v)
                w[i] = p
                if pred.orient(*w) < 0:
                    t = self.tn[t][i]
                    moved = True
                    break
            if not moved:
                return t
        raise RuntimeError("point location did not terminate")

    def insert(self, p: int) -> None:
        start = self._locate(p)
        cache: dict = {}
        if not self._conflict(start, p, cache):
            # start is a ghost whose face p does not strictly see; search the
            # ring of ghosts for one in conflict
            start = next(t for t in range(len(self.tv))
                         if self.alive[t] and self._conflict(t, p, cache))
        cavity = {start}
        stack = [start]
        boundary = []
        while stack:
            t = stack.pop()
            for i in range(4):
                n = self.tn[t][i]
                if n in cavity:
                    continue
                if self._conflict(n, p, cache):
                    cavity.add(n)
                    stack.append(n)
                else:
                    boundary.append((t, i))
        created = []
        for t, i in boundary:
            w = list(self.tv[t])
            w[i] = p
            outside = self.tn[t][i]
            created.append((w, i, outside, t))
        new_ids = []
        edge_faces = {}
        for w, i, outside, old in created:
            nt = self._new(w)
            new_ids.append(nt)
            self.tn[nt][i] = outside
            on = self.tn[outside]
            on[on.index(old)] = nt
            for k in range(4):
                if k == i:
                    continue
                a, b = [w[x] for x in range(4) if x != i and x != k]
                key = (a, b) if a < b else (b, a)
                other = edge_faces.pop(key, None)
                if other is None:
                    edge_faces[key] = (nt, k)
                else:
                    u, j = other
                    self.tn[nt][k] = u
                    self.tn[u][j] = nt
        if edge_faces:
            raise RuntimeError("cavity boundary is not a closed surface")
        for t in sorted(cavity):
            self.alive[t] = False
            self.free.append(t)
        self.last = next((t for t in new_ids if INF not in self.tv[t]), new_ids[0])

    def solid_tetrahedra(self) -> list[tuple[int, int, int, int]]:
        return [tuple(sorted(v)) for t, v in enumerate(self.tv)
                if self.alive[t] and INF not in v]


def _faces_of(tets: np.ndarray, k: int) -> np.ndarray:
    """Distinct k-vertex faces of sorted tetrahedra, lexicographically ordered."""
    if len(tets) == 0:
        return np.zeros((0, k), dtype=np.int64)
    faces = np.concatenate([tets[:, list(c)] for c in combinations(range(4), k)])
    return np.unique(faces, axis=0)


def delaunay3(points: np.ndarray, seed: int = 0) -> DelaunayComplex:
    """Delaunay complex of distinct 3D points.

    ``seed`` only shuffles the insertion order; the perturbed triangulation
    itself does not depend on it.
    """
    points = np.ascontiguousarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError("points must have shape (n, 3)")
    pred = Predicates(points)
    first = _initial_simplex(pred)
    order = insertion_order(points, first, seed=seed)
    tets = kernels.delaunay_tets(points, order, first, seed, pred)
    tets = tets[np.lexsort(tets.T[::-1])] if len(tets) else tets
    return DelaunayComplex(points=points, tetrahedra=tets,
                           triangles=_faces_of(tets, 3), edges=_faces_of(tets, 2),
                           n_vertices=len(points))
