"""End-to-end reconstruction: alpha filtration to fitted subdivision surfaces."""
from __future__ import annotations

import json
import time
import warnings
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io as tio
from ._accel import BACKEND
from .cycles import persistent_volume
from .errors import EmptiedVolume, EmptyDiagram, EmptySubset, NotManifold
from .filtration import Filtration, alpha_filtration
from .fitting import FitReport, fit, neighbor_subset
from .mesh import SurfaceMesh, clean_volume, mesh_from_volume, volume_components
from .pd_analysis import SignificanceSplit, project_persistence, significant_candidates, split_significant
from .persistence import PersistenceDiagram, PersistencePair, compute_persistence
from .pointcloud import PointCloud
from .qem import qem_simplify

TOPOLOGY_STAGES = ("filtration", "persistence", "significance", "cycles")
FITTING_STAGES = ("neighbors", "simplification", "fitting")


@dataclass(frozen=True)
class PipelineConfig:
    target_ratio: float = 0.25
    subdiv_levels: int = 2
    eps: float = 1e-3
    max_iters: int = 100
    output_dir: str | None = None
    export_pd: bool = False
    perturbation_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.target_ratio < 1.0:
            raise ValueError("target_ratio must lie in (0, 1)")
        if not self.eps > 0.0:
            raise ValueError("eps must be positive")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if int(self.subdiv_levels) != self.subdiv_levels or self.subdiv_levels < 0:
            raise ValueError("subdiv_levels must be a non-negative integer")


@dataclass
class Component:
    mesh: SurfaceMesh
    report: FitReport
    n_neighbors: int
    pair: PersistencePair
    control: SurfaceMesh
    shells: int = 1

    @property
    def rms(self) -> float:
        return self.report.rms_history[-1]


@dataclass
class ReconstructionResult:
    components: list[Component]
    diagram: PersistenceDiagram | None
    significance: SignificanceSplit | None
    timings: dict[str, float]
    candidates: list[PersistencePair] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    filtration: Filtration | None = field(default=None, repr=False)
    n_input: int = 0
    n_unique: int = 0

    @property
    def topology_time(self) -> float:
        return sum(self.timings.get(k, 0.0) for k in TOPOLOGY_STAGES)

    @property
    def fitting_time(self) -> float:
        return sum(self.timings.get(k, 0.0) for k in FITTING_STAGES)

    def significant_pairs(self) -> list[PersistencePair]:
        if self.significance is None:
            return []
        return [self.candidates[i] for i in self.significance.significant]


@contextmanager
def _timed(timings: dict, stage: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        timings[stage] = timings.get(stage, 0.0) + time.perf_counter() - t0


def _component(cloud, filt, pair, cfg, timings, notes):
    with _timed(timings, "cycles"):
        pv = persistent_volume(filt, pair)
        vol, _ = clean_volume(set(pv.volume.simplices), filt)
        shells = volume_components(vol, filt)
        if len(shells) > 1:
            notes.append(f"pair ({pair.birth:.6g}, {pair.death:.6g}): cleaned volume "
                         f"split into {len(shells)} shells; kept the largest")
        surface = mesh_from_volume(shells[0], filt)
    with _timed(timings, "neighbors"):
        targets, _ = neighbor_subset(cloud, surface.vertices)
    with _timed(timings, "simplification"):
        control = qem_simplify(surface, cfg.target_ratio)
    with _timed(timings, "fitting"):
        report = fit(control, targets, levels=cfg.subdiv_levels, eps=cfg.eps,
                     max_iters=cfg.max_iters)
    if not report.converged:
        notes.append(f"pair ({pair.birth:.6g}, {pair.death:.6g}): fit stopped at "
                     f"max_iters={cfg.max_iters} without meeting eps")
    return Component(report.refined, report, len(targets), pair, control, len(shells))


def reconstruct(cloud: PointCloud, cfg: PipelineConfig | None = None) -> ReconstructionResult:
    """Run the whole reconstruction on ``cloud``.

    Each significant 2-dimensional diagram point yields one closed surface,
    strongest first.  Per-component failures are recorded, not raised.
    """
    cfg = cfg or PipelineConfig()
    if not isinstance(cloud, PointCloud):
        cloud = PointCloud(cloud)
    timings: dict[str, float] = {}
    notes: list[str] = []
    failures: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        unique, _ = cloud.deduplicated()
        with _timed(timings, "filtration"):
            filt = alpha_filtration(unique, seed=cfg.perturbation_seed)
        with _timed(timings, "persistence"):
            diagram = compute_persistence(filt)
        candidates = significant_candidates(diagram)
        split = None
        components: list[Component] = []
        with _timed(timings, "significance"):
            try:
                split = split_significant(project_persistence(diagram))
            except EmptyDiagram as exc:
                notes.append(f"no surfaces: {exc}")
        if split is not None:
            chosen = sorted(split.significant,
                            key=lambda i: (-candidates[i].persistence, candidates[i].pos_simplex))
            for i in chosen:
                pair = candidates[i]
                try:
                    components.append(_component(unique, filt, pair, cfg, timings, notes))
                except (EmptiedVolume, EmptySubset, NotManifold) as exc:
                    failures.append(f"pair ({pair.birth:.6g}, {pair.death:.6g}): "
                                    f"{type(exc).__name__}: {exc}")
    for w in caught:
        notes.append(f"{w.category.__name__}: {w.message}")
    for stage in TOPOLOGY_STAGES + FITTING_STAGES:
        timings.setdefault(stage, 0.0)
    return ReconstructionResult(components, diagram, split, timings, candidates,
                                failures, notes, filt, len(cloud), len(unique))


def _config_dict(cfg: PipelineConfig) -> dict:
    d = asdict(cfg)
    d["output_dir"] = None if cfg.output_dir is None else str(cfg.output_dir)
    return d


def _finite(x: float):
    return x if np.isfinite(x) else None


def run_report(result: ReconstructionResult, cfg: PipelineConfig) -> dict:
    comps = []
    for k, c in enumerate(result.components):
        comps.append({
            "index": k,
            "birth": c.pair.birth,
            "death": c.pair.death,
            "neighbors": c.n_neighbors,
            "control_vertices": c.control.n_vertices,
            "vertices": c.mesh.n_vertices,
            "faces": c.mesh.n_faces,
            "euler_characteristic": c.mesh.euler_characteristic(),
            "closed_manifold": c.mesh.is_closed_manifold(),
            "iterations": c.report.iterations,
            "converged": c.report.converged,
            "rms": c.rms,
            "rms_history": c.report.rms_history,
        })
    return {
        "config": _config_dict(cfg),
        "backend": BACKEND,
        "filtration_value": "alpha radius",
        "points": {"input": result.n_input, "unique": result.n_unique},
        "significant": len(result.significant_pairs()),
        "threshold": None if result.significance is None else _finite(result.significance.threshold),
        "components": comps,
        "failures": result.failures,
        "timings": dict(result.timings,
                        topology_total=result.topology_time,
                        fitting_total=result.fitting_time),
        "warnings": result.warnings,
    }


def export_outputs(result: ReconstructionResult, cfg: PipelineConfig) -> list[Path]:
    """Write one OFF mesh per component, the diagram CSV (optional) and a JSON report."""
    if cfg.output_dir is None:
        raise ValueError("config has no output_dir")
    out = tio.ensure_dir(cfg.output_dir)
    written = []
    for k, c in enumerate(result.components):
        p = out / f"component_{k}.off"
        tio.write_off(c.mesh, p)
        written.append(p)
    if cfg.export_pd and result.diagram is not None:
        sig = set()
        if result.significance is not None:
            sig = {result.candidates[i] for i in result.significance.significant}
        simp = result.filtration.simplices
        rows = [(p, simp[p.pos_simplex],
                 None if p.neg_simplex is None else simp[p.neg_simplex], p in sig)
                for p in result.diagram.pairs]
        p = out / "diagram.csv"
        tio.write_pd_csv(rows, p)
        written.append(p)
    p = out / "report.json"
    with open(p, "w") as fh:
        json.dump(run_report(result, cfg), fh, indent=2, allow_nan=False, default=float)
        fh.write("\n")
    written.append(p)
    return written
