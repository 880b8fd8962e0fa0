import itertools
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.spatial import ConvexHull

sys.path.insert(0, str(Path(__file__).parent))

from toporecon.cycles import Chain, PersistentVolume, boundary  # noqa: E402
from toporecon.delaunay import delaunay3  # noqa: E402
from toporecon.filtration import Filtration, alpha_filtration  # noqa: E402
from toporecon.mesh import SurfaceMesh  # noqa: E402
from toporecon.synthetic import torus_mesh  # noqa: E402

A, B, C, D, E = range(5)


def abcde_filtration() -> Filtration:
    """Vertices A..E; five triangles at r0, [ABC] r1, [BCD] r2, [ABCD] r3, [BCDE] r4."""
    red = [(A, B, D), (A, C, D), (B, C, E), (B, D, E), (C, D, E)]
    values = {}
    for tri in red:
        for k in (1, 2, 3):
            for f in itertools.combinations(tri, k):
                values[f] = 0.0
    for f in itertools.combinations((A, B, C), 2):
        values.setdefault(f, 0.0)
    values[(B, C, D)] = 2.0
    values[(A, B, C)] = 1.0
    values[(A, B, C, D)] = 3.0
    values[(B, C, D, E)] = 4.0
    return Filtration.from_complex(values)


@pytest.fixture
def abcde():
    return abcde_filtration()


def random_filtration(rng, n_points: int = 8, max_tets: int = 20):
    """Delaunay complex of a small random cloud with random monotone values.

    Each simplex draws a value, then values are lowered top-down so that
    every face enters no later than its cofaces.
    """
    while True:
        pts = rng.random((n_points, 3))
        dc = delaunay3(pts)
        if len(dc.tetrahedra) <= max_tets:
            break
    simplices = ([(i,) for i in range(n_points)]
                 + [tuple(e) for e in dc.edges.tolist()]
                 + [tuple(t) for t in dc.triangles.tolist()]
                 + [tuple(t) for t in dc.tetrahedra.tolist()])
    val = {s: float(rng.random()) for s in simplices}
    for k in (4, 3, 2):
        for s in [s for s in simplices if len(s) == k]:
            for f in itertools.combinations(s, k - 1):
                val[f] = min(val[f], val[s])
    return Filtration(list(val), list(val.values()), points=pts)


def pinched_volume(seed: int):
    """A ball of Delaunay tetrahedra plus tets glued on at a single vertex or edge.

    Returns (filtration, volume tet ids, number of glued tets).
    """
    rng = np.random.default_rng(seed)
    g = np.stack(np.meshgrid(*[np.arange(6.0)] * 3, indexing="ij"), -1).reshape(-1, 3)
    pts = g + rng.uniform(-0.25, 0.25, size=g.shape)
    filt = alpha_filtration(pts)
    tets = filt.ids_of_dim(3)
    cents = np.array([pts[list(filt.simplices[t])].mean(axis=0) for t in tets])
    center = rng.uniform(1.8, 3.2, size=3)
    radius = rng.uniform(1.2, 1.7)
    vol = {int(t) for t, c in zip(tets, cents) if np.linalg.norm(c - center) < radius}
    used = {v for t in vol for v in filt.simplices[t]}
    glued = 0
    want = int(rng.integers(1, 4))
    for t in rng.permutation(tets).tolist():
        if glued == want:
            break
        verts = set(filt.simplices[t])
        share = len(verts & used)
        if share in (1, 2) and t not in vol:
            # must not share a triangle or edge beyond the intended contact
            vol.add(t)
            used |= verts
            glued += 1
    return filt, vol, glued


def as_pv(filt, vol) -> PersistentVolume:
    v = Chain(3, frozenset(vol))
    return PersistentVolume(None, v, boundary(v, filt))


def random_closed_mesh(seed: int) -> SurfaceMesh:
    rng = np.random.default_rng(seed)
    if seed % 2:
        mesh = torus_mesh(int(rng.integers(3, 9)), int(rng.integers(3, 9)),
                          major=1.0, minor=float(rng.uniform(0.2, 0.5)))
        return SurfaceMesh(mesh.vertices + rng.normal(scale=0.02, size=mesh.vertices.shape),
                           mesh.faces)
    pts = rng.normal(size=(int(rng.integers(6, 40)), 3))
    hull = ConvexHull(pts)
    used = np.unique(hull.simplices)
    remap = {v: i for i, v in enumerate(used)}
    faces = [[remap[v] for v in f] for f in hull.simplices.tolist()]
    return SurfaceMesh(pts[used], faces)


# --- acceptance reporting -------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Record one criterion's verdict; the caller asserts ``ok`` afterwards."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
