"""Synthetic point clouds and meshes used by tests, benchmarks and demos."""
from __future__ import annotations

import numpy as np

from .mesh import SurfaceMesh


def sample_sphere(n: int, radius: float = 1.0, center=(0.0, 0.0, 0.0),
                  noise: float = 0.0, rng=None) -> np.ndarray:
    """Uniform samples on a sphere plus isotropic Gaussian noise."""
    rng = np.random.default_rng(rng)
    p = rng.normal(size=(n, 3))
    p /= np.linalg.norm(p, axis=1)[:, None]
    p = radius * p + np.asarray(center, dtype=float)
    if noise > 0:
        p += rng.normal(scale=noise, size=p.shape)
    return p


def sample_torus(n: int, major: float = 1.0, minor: float = 0.3,
                 center=(0.0, 0.0, 0.0), noise: float = 0.0, rng=None) -> np.ndarray:
    """Area-uniform samples on a torus with axis z (rejection on the tube angle)."""
    rng = np.random.default_rng(rng)
    out = []
    need = n
    while need > 0:
        u = rng.uniform(0, 2 * np.pi, size=2 * need)
        v = rng.uniform(0, 2 * np.pi, size=2 * need)
        w = rng.uniform(0, major + minor, size=2 * need)
        ok = w <= major + minor * np.cos(v)
        u, v = u[ok][:need], v[ok][:need]
        ring = major + minor * np.cos(v)
        out.append(np.stack([ring * np.cos(u), ring * np.sin(u), minor * np.sin(v)], axis=1))
        need -= len(u)
    p = np.concatenate(out) + np.asarray(center, dtype=float)
    if noise > 0:
        p += rng.normal(scale=noise, size=p.shape)
    return p


def sphere_and_torus(n: int = 8000, noise: float = 0.005, rng=None) -> np.ndarray:
    """Unit sphere at the origin touching a (1, 0.3) torus at (1, 0, 0).

    Points are split between the two surfaces in proportion to their areas.
    """
    rng = np.random.default_rng(rng)
    a_sphere = 4 * np.pi
    a_torus = 4 * np.pi ** 2 * 1.0 * 0.3
    n_sphere = int(round(n * a_sphere / (a_sphere + a_torus)))
    s = sample_sphere(n_sphere, noise=noise, rng=rng)
    t = sample_torus(n - n_sphere, 1.0, 0.3, center=(2.3, 0.0, 0.0), noise=noise, rng=rng)
    return np.concatenate([s, t])


def icosahedron() -> SurfaceMesh:
    g = (1 + 5 ** 0.5) / 2
    v = np.array([[-1, g, 0], [1, g, 0], [-1, -g, 0], [1, -g, 0],
                  [0, -1, g], [0, 1, g], [0, -1, -g], [0, 1, -g],
                  [g, 0, -1], [g, 0, 1], [-g, 0, -1], [-g, 0, 1]], dtype=float)
    v /= np.linalg.norm(v, axis=1)[:, None]
    f = np.array([[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
                  [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
                  [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
                  [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]])
    return SurfaceMesh(v, f)


def icosphere(levels: int = 2) -> SurfaceMesh:
    """Icosahedron split ``levels`` times (4x faces each) and pushed onto the unit sphere."""
    mesh = icosahedron()
    v = [tuple(x) for x in mesh.vertices.tolist()]
    faces = mesh.faces.tolist()
    for _ in range(levels):
        mid: dict = {}

        def midpoint(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in mid:
                p = (np.asarray(v[a]) + np.asarray(v[b])) / 2
                v.append(tuple(p / np.linalg.norm(p)))
                mid[key] = len(v) - 1
            return mid[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        faces = new
    return SurfaceMesh(np.array(v), np.array(faces))


def torus_mesh(nu: int = 20, nv: int = 20, major: float = 1.0, minor: float = 0.3) -> SurfaceMesh:
    """Regular quad grid on a torus, each quad split in two; 2*nu*nv faces."""
    u = 2 * np.pi * np.arange(nu) / nu
    w = 2 * np.pi * np.arange(nv) / nv
    uu, ww = np.meshgrid(u, w, indexing="ij")
    ring = major + minor * np.cos(ww)
    v = np.stack([ring * np.cos(uu), ring * np.sin(uu), minor * np.sin(ww)], axis=-1).reshape(-1, 3)
    faces = []
    for i in range(nu):
        for j in range(nv):
            a = i * nv + j
            b = ((i + 1) % nu) * nv + j
            c = ((i + 1) % nu) * nv + (j + 1) % nv
            d = i * nv + (j + 1) % nv
            faces += [[a, b, c], [a, c, d]]
    return SurfaceMesh(v, np.array(faces))
