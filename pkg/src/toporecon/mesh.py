"""Triangle meshes built from 2-cycles, and removal of non-manifold features."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .cycles import Chain, PersistentVolume, boundary
from .errors import EmptiedVolume
from .filtration import Filtration


@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray
    faces: np.ndarray
    source_ids: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           np.asarray(self.vertices, dtype=float).reshape(-1, 3))
        object.__setattr__(self, "faces",
                           np.asarray(self.faces, dtype=np.int64).reshape(-1, 3))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def edges(self) -> np.ndarray:
        """Unique undirected edges as sorted pairs, lexicographically ordered."""
        f = self.faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    def edge_face_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = defaultdict(int)
        for a, b, c in self.faces.tolist():
            for u, v in ((a, b), (b, c), (c, a)):
                counts[(u, v) if u < v else (v, u)] += 1
        return dict(counts)

    def euler_characteristic(self) -> int:
        used = np.unique(self.faces)
        return len(used) - len(self.edges()) + self.n_faces

    @property
    def closed(self) -> bool:
        return self.n_faces > 0 and all(c == 2 for c in self.edge_face_counts().values())

    @property
    def manifold(self) -> bool:
        if any(c > 2 for c in self.edge_face_counts().values()):
            return False
        return not _pinched_vertices(self.faces.tolist())

    def is_closed_manifold(self) -> bool:
        return self.closed and self.manifold


def _pinched_vertices(faces: list) -> set[int]:
    """Vertices whose incident faces are not connected through shared edges at the vertex."""
    star: dict[int, list[int]] = defaultdict(list)
    for fi, f in enumerate(faces):
        for v in f:
            star[v].append(fi)
    flagged = set()
    for v, fan in star.items():
        if len(fan) == 1:
            continue
        # walk the fan: faces around v are linked when they share an edge (v, w)
        by_other: dict[int, list[int]] = defaultdict(list)
        for fi in fan:
            for w in faces[fi]:
                if w != v:
                    by_other[w].append(fi)
        seen = {fan[0]}
        stack = [fan[0]]
        while stack:
            fi = stack.pop()
            for w in faces[fi]:
                if w == v:
                    continue
                for fj in by_other[w]:
                    if fj not in seen:
                        seen.add(fj)
                        stack.append(fj)
        if len(seen) != len(fan):
            flagged.add(v)
    return flagged


def _cycle_triangles(cycle: Chain, filtration: Filtration) -> list[tuple[int, int, int]]:
    if cycle.dim != 2:
        raise ValueError("expected a 2-chain")
    return [filtration.simplices[t] for t in cycle.sorted()]


def find_nonmanifold_vertices(cycle: Chain, filtration: Filtration) -> set[int]:
    """Point ids at which the cycle's face fan is disconnected."""
    return _pinched_vertices(_cycle_triangles(cycle, filtration))


def find_nonmanifold_edges(cycle: Chain, filtration: Filtration) -> set[tuple[int, int]]:
    """Edges (sorted point-id pairs) incident to more than two cycle triangles."""
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for a, b, c in _cycle_triangles(cycle, filtration):
        counts[(a, b)] += 1
        counts[(a, c)] += 1
        counts[(b, c)] += 1
    return {e for e, n in counts.items() if n > 2}


def _groups_around(feature: tuple, tets: list[int], filtration: Filtration) -> list[list[int]]:
    """Split tets containing ``feature`` into classes linked by triangles that contain it."""
    fset = set(feature)
    members = set(tets)
    seen: set[int] = set()
    groups = []
    for t in sorted(tets):
        if t in seen:
            continue
        seen.add(t)
        group = [t]
        stack = [t]
        while stack:
            s = stack.pop()
            for tri in filtration.boundary(s).tolist():
                if not fset.issubset(filtration.simplices[tri]):
                    continue
                for u in filtration.cofaces(tri).tolist():
                    if u in members and u not in seen:
                        seen.add(u)
                        group.append(u)
                        stack.append(u)
        groups.append(sorted(group))
    return groups


def _deletions(features, volume: set[int], filtration: Filtration) -> set[int]:
    """Tets to drop so that each flagged feature keeps at most one wedge."""
    incident: dict[tuple, list[int]] = defaultdict(list)
    fsets = [(f, set(f)) for f in features]
    for t in volume:
        verts = filtration.simplices[t]
        for f, fs in fsets:
            if fs.issubset(verts):
                incident[f].append(t)
    doomed: set[int] = set()
    for f, tets in incident.items():
        groups = _groups_around(f, tets, filtration)
        if len(groups) == 1:
            doomed.update(groups[0])
        else:
            keep = max(groups, key=lambda g: (len(g), -g[0]))
            for g in groups:
                if g is not keep:
                    doomed.update(g)
    return doomed


def clean_volume(volume: set[int], filtration: Filtration,
                 log: list | None = None) -> tuple[set[int], list[int]]:
    """Delete tetrahedra around non-manifold vertices, then edges, to a fixed point.

    Returns the cleaned volume and the deleted tetrahedra in deletion order.
    If ``log`` is given, one ``(features, deleted tets)`` entry is appended
    per pass, features being vertex 1-tuples or edge 2-tuples of point ids.
    """
    vol = set(volume)
    deleted: list[int] = []
    while True:
        if not vol:
            raise EmptiedVolume("cleanup removed every tetrahedron of the volume")
        cyc = boundary(Chain(3, frozenset(vol)), filtration)
        bad_v = find_nonmanifold_vertices(cyc, filtration)
        if bad_v:
            features = [(v,) for v in sorted(bad_v)]
        else:
            features = sorted(find_nonmanifold_edges(cyc, filtration))
            if not features:
                return vol, deleted
        doomed = _deletions(features, vol, filtration)
        if log is not None:
            log.append((features, sorted(doomed)))
        vol -= doomed
        deleted.extend(sorted(doomed))


def volume_components(volume: set[int], filtration: Filtration) -> list[set[int]]:
    """Face-connected components of a set of tetrahedra, largest first."""
    remaining = set(volume)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        stack = [seed]
        remaining.discard(seed)
        while stack:
            t = stack.pop()
            for tri in filtration.boundary(t).tolist():
                for u in filtration.cofaces(tri).tolist():
                    if u in remaining:
                        remaining.discard(u)
                        comp.add(u)
                        stack.append(u)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def mesh_from_volume(volume: set[int], filtration: Filtration) -> SurfaceMesh:
    """Boundary of a set of tetrahedra, with faces oriented away from the volume."""
    if filtration.points is None:
        raise ValueError("filtration carries no point coordinates")
    pts = filtration.points
    owner: dict[int, int] = {}
    for t in volume:
        for tri in filtration.boundary(t).tolist():
            if tri in owner:
                del owner[tri]
            else:
                owner[tri] = t
    faces = []
    for tri in sorted(owner):
        a, b, c = filtration.simplices[tri]
        (d,) = set(filtration.simplices[owner[tri]]) - {a, b, c}
        n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        if np.dot(n, pts[d] - pts[a]) > 0:
            b, c = c, b
        faces.append((a, b, c))
    ids = np.unique(np.array(faces, dtype=np.int64).reshape(-1))
    remap = {int(v): i for i, v in enumerate(ids)}
    local = [[remap[v] for v in f] for f in faces]
    return SurfaceMesh(pts[ids], np.array(local, dtype=np.int64).reshape(-1, 3), ids)


def clean_cycle(pv: PersistentVolume, filtration: Filtration) -> SurfaceMesh:
    """Manifold surface bounding the cleaned persistent volume."""
    vol, _ = clean_volume(set(pv.volume.simplices), filtration)
    return mesh_from_volume(vol, filtration)
