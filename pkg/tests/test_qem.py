import warnings

import numpy as np
import pytest

from toporecon import NotManifold, SimplificationBlocked, SurfaceMesh, qem_simplify
from toporecon.synthetic import icosphere, torus_mesh

TET = SurfaceMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
                  [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])


def _no_warning(fn, *args):
    with warnings.catch_warnings():
        warnings.simplefilter("error", SimplificationBlocked)
        return fn(*args)


def test_icosphere_to_quarter():
    mesh = icosphere(2)
    assert mesh.n_faces == 320
    out = _no_warning(qem_simplify, mesh, 0.25)
    assert out.n_faces <= 80
    assert out.euler_characteristic() == 2
    assert out.is_closed_manifold()


def test_torus_to_quarter():
    mesh = torus_mesh(20, 20)
    assert mesh.n_faces == 800
    out = _no_warning(qem_simplify, mesh, 0.25)
    assert out.n_faces <= 200
    assert out.euler_characteristic() == 0
    assert out.is_closed_manifold()


def test_tetrahedron_is_blocked():
    with pytest.warns(SimplificationBlocked):
        out = qem_simplify(TET, 0.25)
    assert out.n_faces == 4


@pytest.mark.parametrize("ratio", [0.05, 0.1, 0.5, 0.9])
@pytest.mark.parametrize("make,chi", [(lambda: icosphere(2), 2), (lambda: torus_mesh(16, 12), 0)])
def test_topology_preserved_at_any_budget(make, chi, ratio):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SimplificationBlocked)
        out = qem_simplify(make(), ratio)
    assert out.euler_characteristic() == chi
    assert out.is_closed_manifold()


def test_noisy_sphere_keeps_orientation():
    mesh = icosphere(3)
    rng = np.random.default_rng(0)
    noisy = SurfaceMesh(mesh.vertices * (1 + rng.normal(scale=0.01, size=(len(mesh.vertices), 1))),
                        mesh.faces)
    out = qem_simplify(noisy, 0.25)
    v, f = out.vertices, out.faces
    normals = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
    centres = v[f].mean(axis=1)
    assert np.all(np.einsum("ij,ij->i", normals, centres) > 0)
    # quadric placement keeps vertices near the sphere
    assert np.abs(np.linalg.norm(v, axis=1) - 1).max() < 0.1


def test_bad_ratio():
    with pytest.raises(ValueError):
        qem_simplify(icosphere(1), 1.0)


def test_open_mesh_rejected():
    with pytest.raises(NotManifold):
        qem_simplify(SurfaceMesh(TET.vertices, TET.faces[:3]), 0.5)
