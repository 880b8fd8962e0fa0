import json

import numpy as np
import pytest

from toporecon import (DegenerateInput, PipelineConfig, PointCloud, export_outputs, read_off,
                       reconstruct)
from toporecon.cli import main
from toporecon.synthetic import sample_sphere, sphere_and_torus


@pytest.fixture(scope="module")
def sphere_result():
    cloud = PointCloud(sample_sphere(2000, noise=0.005, rng=11))
    return reconstruct(cloud, PipelineConfig())


@pytest.fixture(scope="module")
def twin_cloud():
    a = sample_sphere(1200, noise=0.005, rng=1)
    b = sample_sphere(1200, radius=0.9, center=(3.0, 0.5, 0.0), noise=0.005, rng=2)
    return PointCloud(np.vstack([a, b]))


@pytest.fixture(scope="module")
def twin_result(twin_cloud):
    return reconstruct(twin_cloud, PipelineConfig())


def test_sphere_gives_one_closed_surface(sphere_result):
    r = sphere_result
    assert len(r.significant_pairs()) == 1
    assert len(r.components) == 1 and not r.failures
    mesh = r.components[0].mesh
    assert mesh.is_closed_manifold()
    assert mesh.euler_characteristic() == 2
    assert np.abs(np.linalg.norm(mesh.vertices, axis=1) - 1).max() < 0.1


def test_component_count_matches_significance(sphere_result, twin_result):
    for r in (sphere_result, twin_result):
        assert len(r.components) == len(r.significant_pairs()) - len(r.failures)


def test_two_spheres_two_surfaces(twin_result):
    r = twin_result
    assert len(r.components) == 2
    centres = sorted(c.mesh.vertices.mean(axis=0)[0] for c in r.components)
    assert centres == pytest.approx([0.0, 3.0], abs=0.05)
    assert all(c.mesh.euler_characteristic() == 2 for c in r.components)
    # ordered by decreasing persistence
    assert r.components[0].pair.persistence >= r.components[1].pair.persistence


def test_timings_split(sphere_result):
    t = sphere_result.timings
    for stage in ("filtration", "persistence", "significance", "cycles",
                  "neighbors", "simplification", "fitting"):
        assert t[stage] >= 0.0
    assert sphere_result.topology_time > 0 and sphere_result.fitting_time > 0


def test_collinear_points_are_degenerate():
    with pytest.raises(DegenerateInput):
        reconstruct(PointCloud(np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0]], float)))


def test_no_voids_means_no_components():
    pts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0.3, 0.3, 0.3]], float)
    r = reconstruct(PointCloud(pts))
    assert r.components == [] and r.failures == []
    assert any("no surfaces" in w for w in r.warnings)


def test_duplicates_are_merged():
    pts = sample_sphere(600, noise=0.005, rng=4)
    r = reconstruct(PointCloud(np.vstack([pts, pts[:50]])))
    assert (r.n_input, r.n_unique) == (650, 600)
    assert len(r.components) == 1


@pytest.mark.parametrize("kw", [dict(target_ratio=0.0), dict(target_ratio=1.0), dict(eps=0.0),
                                dict(max_iters=0), dict(max_iters=2.5), dict(subdiv_levels=-1)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        PipelineConfig(**kw)


def test_export_two_components(tmp_path, twin_result):
    cfg = PipelineConfig(output_dir=str(tmp_path / "o"), export_pd=True)
    written = export_outputs(twin_result, cfg)
    names = sorted(p.name for p in written)
    assert names == ["component_0.off", "component_1.off", "diagram.csv", "report.json"]
    for k, c in enumerate(twin_result.components):
        back = read_off(tmp_path / "o" / f"component_{k}.off")
        assert (back.n_vertices, back.n_faces) == (c.mesh.n_vertices, c.mesh.n_faces)
    lines = (tmp_path / "o" / "diagram.csv").read_text().splitlines()
    assert lines[0] == "dim,birth,death,pos_simplex,neg_simplex,significant"
    assert len(lines) - 1 == len(twin_result.diagram.pairs)
    assert sum(line.endswith(",1") for line in lines[1:]) == 2
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["config"]["target_ratio"] == 0.25
    assert len(report["components"]) == 2
    hist = report["components"][0]["rms_history"]
    assert hist == twin_result.components[0].report.rms_history
    assert "topology_total" in report["timings"] and "fitting_total" in report["timings"]
    assert isinstance(report["warnings"], list)


def test_export_needs_output_dir(sphere_result):
    with pytest.raises(ValueError):
        export_outputs(sphere_result, PipelineConfig())


@pytest.mark.xfail(strict=True, reason="2-means on projected persistence puts the torus in the "
                                       "noise class at this sampling; see ledger")
def test_tangent_sphere_and_torus():
    r = reconstruct(PointCloud(sphere_and_torus(8000, noise=0.005, rng=0)))
    chis = sorted(c.mesh.euler_characteristic() for c in r.components)
    assert chis == [0, 2]


# --- CLI ----------------------------------------------------------------------

def _xyz(path, pts):
    path.write_text("".join("%.17g %.17g %.17g\n" % tuple(p) for p in pts))
    return path


def test_cli_success_and_determinism(tmp_path, capsys):
    src = _xyz(tmp_path / "s.xyz", sample_sphere(800, noise=0.005, rng=9))
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert main(["reconstruct", str(src), "--out", str(out), "--export-pd"]) == 0
        outs.append(out)
    for name in ("component_0.off", "diagram.csv"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    assert "1 surfaces" in capsys.readouterr().out


def test_cli_flags_reach_config(tmp_path):
    src = _xyz(tmp_path / "s.xyz", sample_sphere(500, noise=0.005, rng=10))
    out = tmp_path / "o"
    code = main(["reconstruct", str(src), "--out", str(out), "--ratio", "0.5", "--levels", "1",
                 "--eps", "0.01", "--max-iters", "3", "--seed", "7"])
    assert code == 0
    cfg = json.loads((out / "report.json").read_text())["config"]
    assert cfg == {"target_ratio": 0.5, "subdiv_levels": 1, "eps": 0.01, "max_iters": 3,
                   "output_dir": str(out), "export_pd": False, "perturbation_seed": 7}
    assert not (out / "diagram.csv").exists()


def test_cli_degenerate_exit_code(tmp_path):
    src = _xyz(tmp_path / "c.xyz", [[0, 0, 0], [1, 0, 0], [2, 0, 0]])
    assert main(["reconstruct", str(src), "--out", str(tmp_path / "o")]) == 2


@pytest.mark.parametrize("content", [None, "", "0 0 zero\n"])
def test_cli_io_errors(tmp_path, content):
    src = tmp_path / "bad.xyz"
    if content is not None:
        src.write_text(content)
    assert main(["reconstruct", str(src), "--out", str(tmp_path / "o")]) == 1


def test_cli_bad_config(tmp_path):
    src = _xyz(tmp_path / "s.xyz", sample_sphere(50, rng=1))
    assert main(["reconstruct", str(src), "--ratio", "1.5", "--out", str(tmp_path / "o")]) == 1


def test_cli_unwritable_output(tmp_path):
    src = _xyz(tmp_path / "s.xyz", sample_sphere(300, noise=0.005, rng=2))
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["reconstruct", str(src), "--out", str(blocker / "sub")]) == 1
