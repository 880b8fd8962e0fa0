import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import distance

from toporecon import (EmptySubset, PointCloud, ZeroWeight, fit, loop_subdivide, lspia_step,
                       neighbor_subset)
from toporecon.fitting import rms
from toporecon.synthetic import icosahedron, icosphere, sample_sphere


def _grid(n=5, h=0.5):
    g = np.stack(np.meshgrid(*[np.arange(n) * h] * 3, indexing="ij"), -1).reshape(-1, 3)
    return PointCloud(g)


# --- neighbour subset ---------------------------------------------------------

def test_subset_of_whole_cloud_is_whole_cloud():
    cloud = PointCloud(np.random.default_rng(0).normal(size=(300, 3)))
    sub, _ = neighbor_subset(cloud, cloud.points)
    assert len(sub) == len(cloud)


def test_grid_point_and_axis_neighbours():
    h = 0.5
    cloud = _grid(5, h)
    centre = np.array([[2 * h] * 3])
    sub, d_avg = neighbor_subset(cloud, centre)
    assert d_avg == pytest.approx(h)
    assert len(sub) == 7
    d = np.linalg.norm(sub.points - centre, axis=1)
    assert sorted(np.round(d / h, 12).tolist()) == [0] + [1] * 6


def test_twin_spheres_stay_apart():
    a = sample_sphere(800, noise=0.005, rng=1)
    b = sample_sphere(800, center=(4, 0, 0), noise=0.005, rng=2)
    cloud = PointCloud(np.vstack([a, b]))
    cycle = icosphere(2).vertices
    sub, d_avg = neighbor_subset(cloud, cycle)
    # brute force: distance to nearest cycle vertex
    near = distance.cdist(cloud.points, cycle).min(axis=1) <= d_avg
    assert len(sub) == near.sum()
    assert np.all(np.linalg.norm(sub.points, axis=1) < 2)


def test_subset_errors():
    with pytest.raises(ValueError):
        neighbor_subset(PointCloud(np.zeros((1, 3))), np.zeros((1, 3)))
    with pytest.raises(ValueError):
        neighbor_subset(_grid(), np.zeros((0, 3)))


def test_off_cloud_vertex_uses_nearest_distance():
    # a cycle vertex that is not a cloud point: d_min is its nearest cloud point
    cloud = PointCloud(np.array([[0, 0, 0], [0.1, 0, 0], [3.0, 0, 0]]))
    sub, d_avg = neighbor_subset(cloud, np.array([[1.0, 0, 0]]))
    assert d_avg == pytest.approx(0.9)
    assert sub.points.tolist() == [[0.1, 0, 0]]


# --- LSPIA step ------------------------------------------------------------------

def test_fixed_point():
    control = icosahedron()
    refined, basis = loop_subdivide(control, 2)
    new, e = lspia_step(control, basis, PointCloud(refined.vertices))
    assert e == 0.0
    assert np.array_equal(new.vertices, control.vertices)


@settings(max_examples=25, deadline=None)
@given(st.tuples(*[st.floats(-0.05, 0.05)] * 3))
def test_translation_is_recovered(t):
    # every target shifted by t from the fixed point: each control vertex moves by t
    control = icosahedron()
    refined, basis = loop_subdivide(control, 2)
    targets = PointCloud(refined.vertices + np.array(t))
    new, e = lspia_step(control, basis, targets)
    assert np.allclose(new.vertices - control.vertices, t, atol=1e-12)
    assert e == pytest.approx(np.linalg.norm(t), abs=1e-12)


def test_sphere_step_reduces_rms():
    control = icosphere(1)
    control = type(control)(control.vertices * 0.8, control.faces)
    _, basis = loop_subdivide(control, 2)
    targets = PointCloud(sample_sphere(2000, noise=0.005, rng=3))
    new, e0 = lspia_step(control, basis, targets)
    _, e1 = lspia_step(new, basis, targets)
    assert e1 < e0


def test_rms_definition():
    control = icosahedron()
    refined, basis = loop_subdivide(control, 1)
    pts = sample_sphere(500, rng=4)
    _, e = lspia_step(control, basis, PointCloud(pts))
    d = distance.cdist(pts, refined.vertices).min(axis=1)
    assert e == pytest.approx(np.sqrt(np.mean(d ** 2)), rel=1e-12)


def test_unsupported_vertices_are_frozen():
    control = icosahedron()
    refined, basis = loop_subdivide(control, 0)
    # targets only near control vertex 0
    targets = PointCloud(refined.vertices[[0]] * 1.1)
    with pytest.warns(ZeroWeight):
        new, _ = lspia_step(control, basis, targets)
    assert np.array_equal(new.vertices[1:], control.vertices[1:])
    assert np.allclose(new.vertices[0], control.vertices[0] * 1.1)


def test_empty_targets():
    control = icosahedron()
    _, basis = loop_subdivide(control, 1)
    with pytest.raises(EmptySubset):
        lspia_step(control, basis, np.zeros((0, 3)))


# --- fit loop ---------------------------------------------------------------------

def test_fixed_start_converges_after_one_iteration():
    control = icosahedron()
    refined, _ = loop_subdivide(control, 2)
    report = fit(control, PointCloud(refined.vertices), levels=2)
    assert report.converged and report.iterations == 1
    assert report.rms_history == [0.0, 0.0]


def test_zero_eps_runs_all_iterations():
    targets = PointCloud(sample_sphere(500, noise=0.005, rng=5))
    with pytest.raises(ValueError):
        fit(icosahedron(), targets, eps=-1.0)
    report = fit(icosahedron(), targets, levels=1, eps=0.0, max_iters=7)
    assert report.iterations == 7 and not report.converged
    assert len(report.rms_history) == 8


def test_history_and_stop_rule():
    targets = PointCloud(sample_sphere(2000, noise=0.005, rng=6))
    report = fit(icosphere(1), targets, levels=2, eps=1e-3)
    h = report.rms_history
    assert len(h) == report.iterations + 1
    assert report.converged
    assert abs(h[-1] / h[-2] - 1) < 1e-3
    assert all(abs(h[k + 1] / h[k] - 1) >= 1e-3 for k in range(len(h) - 2))
    assert h[-1] < h[0]
    assert rms(report.refined.vertices[:1] - report.refined.vertices[:1]) == 0.0


@pytest.mark.xfail(strict=True, reason="two Loop levels on 20 faces cannot get within 2 sigma "
                                       "under nearest-vertex residuals; see ledger")
def test_icosahedron_sphere_within_two_sigma():
    sigma = 0.005
    targets = PointCloud(sample_sphere(2000, noise=sigma, rng=0))
    report = fit(icosahedron(), targets, levels=2, eps=1e-3, max_iters=100)
    assert report.converged
    assert report.rms_history[-1] <= 2 * sigma


def test_icosahedron_sphere_converges():
    # the feasible half of the example above
    targets = PointCloud(sample_sphere(2000, noise=0.005, rng=0))
    with warnings.catch_warnings():
        warnings.simplefilter("error", ZeroWeight)
        report = fit(icosahedron(), targets, levels=2, eps=1e-3, max_iters=100)
    assert report.converged and report.iterations < 100
    assert report.rms_history[-1] < 0.5 * report.rms_history[0]
