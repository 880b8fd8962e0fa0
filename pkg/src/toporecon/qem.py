"""Quadric-error edge-collapse simplification for closed manifold meshes.

Collapses are ordered by quadric error and guarded by the link condition,
which keeps the surface a closed 2-manifold of the same topological type, and
by a normal-flip check so that no surviving face turns over.
"""
from __future__ import annotations

import heapq
import itertools
import math
import warnings

import numpy as np

from .errors import NotManifold, SimplificationBlocked
from .mesh import SurfaceMesh

# a collapse may not turn any surviving face by more than ~78 degrees
_MIN_NORMAL_COS = 0.2


def _face_quadric(p0, p1, p2) -> np.ndarray:
    n = np.cross(p1 - p0, p2 - p0)
    area2 = np.linalg.norm(n)
    if area2 == 0.0:
        return np.zeros((4, 4))
    n = n / area2
    plane = np.append(n, -np.dot(n, p0))
    # weight by area so tiny slivers do not dominate
    return 0.5 * area2 * np.outer(plane, plane)


class _Collapser:
    def __init__(self, mesh: SurfaceMesh):
        self.pos = mesh.vertices.copy()
        self.faces = [list(f) for f in mesh.faces.tolist()]
        self.alive = [True] * len(self.faces)
        self.vfaces: list[set[int]] = [set() for _ in range(len(self.pos))]
        for fi, f in enumerate(self.faces):
            for v in f:
                self.vfaces[v].add(fi)
        self.q = np.zeros((len(self.pos), 4, 4))
        for f in self.faces:
            qf = _face_quadric(*self.pos[f])
            for v in f:
                self.q[v] += qf
        self.version = [0] * len(self.pos)
        self.vertex_alive = [True] * len(self.pos)
        self.n_faces = len(self.faces)
        self.heap: list = []
        self._tick = itertools.count()

    def neighbours(self, v: int) -> set[int]:
        out = set()
        for fi in self.vfaces[v]:
            out.update(self.faces[fi])
        out.discard(v)
        return out

    def _placement(self, u: int, v: int) -> tuple[float, np.ndarray]:
        q = self.q[u] + self.q[v]
        a = q[:3, :3]
        b = -q[:3, 3]
        cands = [self.pos[u], self.pos[v], 0.5 * (self.pos[u] + self.pos[v])]
        if abs(np.linalg.det(a)) > 1e-12 * max(1.0, np.abs(a).max()) ** 3:
            x = np.linalg.solve(a, b)
            # keep the optimum near the edge; far-flung solutions are unstable
            span = np.linalg.norm(self.pos[u] - self.pos[v])
            if np.linalg.norm(x - cands[2]) <= 2.0 * span:
                cands.insert(0, x)
        best = None
        for x in cands:
            h = np.append(x, 1.0)
            cost = float(h @ q @ h)
            if best is None or cost < best[0] - 1e-18:
                best = (max(cost, 0.0), x)
        return best

    def push(self, u: int, v: int) -> None:
        if u > v:
            u, v = v, u
        cost, x = self._placement(u, v)
        heapq.heappush(self.heap, (cost, u, v, self.version[u], self.version[v],
                                   next(self._tick), x))

    def link_ok(self, u: int, v: int) -> bool:
        shared = [fi for fi in self.vfaces[u] if v in self.faces[fi]]
        if len(shared) != 2:
            return False
        opposite = set()
        for fi in shared:
            opposite.update(self.faces[fi])
        opposite -= {u, v}
        if (self.neighbours(u) & self.neighbours(v)) != opposite:
            return False
        # the edge part of the link condition: no edge in both links
        if len(opposite) == 2:
            w1, w2 = opposite
            tri_u = any({w1, w2} <= set(self.faces[fi]) for fi in self.vfaces[u])
            tri_v = any({w1, w2} <= set(self.faces[fi]) for fi in self.vfaces[v])
            if tri_u and tri_v:
                return False
        return True

    def flips(self, u: int, v: int, x: np.ndarray) -> bool:
        for w in (u, v):
            for fi in self.vfaces[w]:
                f = self.faces[fi]
                if u in f and v in f:
                    continue
                p = self.pos[f]
                before = np.cross(p[1] - p[0], p[2] - p[0])
                moved = p.copy()
                moved[f.index(w)] = x
                after = np.cross(moved[1] - moved[0], moved[2] - moved[0])
                nb, na = np.linalg.norm(before), np.linalg.norm(after)
                if na <= 1e-12 * nb or np.dot(before, after) < _MIN_NORMAL_COS * nb * na:
                    return True
        return False

    def collapse(self, u: int, v: int, x: np.ndarray) -> None:
        for fi in list(self.vfaces[v]):
            f = self.faces[fi]
            if u in f:
                self.alive[fi] = False
                self.n_faces -= 1
                for w in f:
                    self.vfaces[w].discard(fi)
            else:
                f[f.index(v)] = u
                self.vfaces[u].add(fi)
        self.vfaces[v] = set()
        self.vertex_alive[v] = False
        self.pos[u] = x
        self.q[u] += self.q[v]
        # only edges at u change cost; stale entries are caught by the version stamp
        self.version[u] += 1
        self.version[v] += 1
        for w in sorted(self.neighbours(u)):
            self.push(u, w)

    def result(self) -> SurfaceMesh:
        keep = [i for i, a in enumerate(self.vertex_alive) if a]
        remap = {v: i for i, v in enumerate(keep)}
        faces = [[remap[v] for v in f] for fi, f in enumerate(self.faces)
                 if self.alive[fi]]
        return SurfaceMesh(self.pos[keep], np.array(faces, dtype=np.int64).reshape(-1, 3))


def qem_simplify(mesh: SurfaceMesh, target_ratio: float = 0.25) -> SurfaceMesh:
    """Collapse edges until at most ``ceil(target_ratio * F)`` faces remain.

    Emits :class:`SimplificationBlocked` when no admissible collapse is left
    before the budget is met.
    """
    if not 0.0 < target_ratio < 1.0:
        raise ValueError("target_ratio must lie in (0, 1)")
    if not mesh.is_closed_manifold():
        raise NotManifold("QEM simplification needs a closed 2-manifold mesh")
    target = math.ceil(target_ratio * mesh.n_faces)
    col = _Collapser(mesh)
    for u, v in mesh.edges().tolist():
        col.push(u, v)
    while col.n_faces > target and col.heap:
        cost, u, v, vu, vv, _, x = heapq.heappop(col.heap)
        if not (col.vertex_alive[u] and col.vertex_alive[v]):
            continue
        if vu != col.version[u] or vv != col.version[v]:
            continue
        if v not in col.neighbours(u):
            continue
        if not col.link_ok(u, v):
            continue
        if col.flips(u, v, x):
            continue
        col.collapse(u, v, x)
    out = col.result()
    if out.n_faces > target:
        warnings.warn(f"simplification stopped at {out.n_faces} faces "
                      f"(budget {target}); no admissible collapse left",
                      SimplificationBlocked, stacklevel=2)
    return out
