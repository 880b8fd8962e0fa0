"""Command-line entry point: ``toporecon reconstruct <input> [options]``."""
from __future__ import annotations

import argparse
import sys

from .errors import DegenerateInput, ParseError
from .io import load_point_cloud
from .pipeline import PipelineConfig, export_outputs, reconstruct

EXIT_OK = 0
EXIT_IO = 1
EXIT_DEGENERATE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toporecon",
                                     description="Topology-aware surface reconstruction "
                                                 "from unorganized point clouds.")
    sub = parser.add_subparsers(dest="command", required=True)
    rec = sub.add_parser("reconstruct", help="reconstruct closed surfaces from a point cloud")
    rec.add_argument("input", help="point cloud (.xyz/.txt, .ply, .off, .obj)")
    rec.add_argument("--ratio", type=float, default=0.25,
                     help="face ratio kept by mesh simplification (default 0.25)")
    rec.add_argument("--levels", type=int, default=2, help="Loop subdivision levels (default 2)")
    rec.add_argument("--eps", type=float, default=1e-3,
                     help="relative RMS change that stops fitting (default 1e-3)")
    rec.add_argument("--max-iters", type=int, default=100, help="fitting iteration cap (default 100)")
    rec.add_argument("--out", default="out", help="output directory (default ./out)")
    rec.add_argument("--export-pd", action="store_true", help="also write diagram.csv")
    rec.add_argument("--seed", type=int, default=0, help="Delaunay insertion-order seed")
    return parser


def _reconstruct(args) -> int:
    try:
        cfg = PipelineConfig(target_ratio=args.ratio, subdiv_levels=args.levels, eps=args.eps,
                             max_iters=args.max_iters, output_dir=args.out,
                             export_pd=args.export_pd, perturbation_seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cloud = load_point_cloud(args.input)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        result = reconstruct(cloud, cfg)
    except DegenerateInput as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    try:
        written = export_outputs(result, cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{len(cloud)} points, {len(result.significant_pairs())} significant, "
          f"{len(result.components)} surfaces")
    for k, c in enumerate(result.components):
        print(f"  component {k}: V={c.mesh.n_vertices} F={c.mesh.n_faces} "
              f"chi={c.mesh.euler_characteristic()} rms={c.rms:.6g} iters={c.report.iterations}")
    for msg in result.failures:
        print(f"  failed: {msg}")
    print(f"topology {result.topology_time:.2f}s, fitting {result.fitting_time:.2f}s")
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "reconstruct":
        return _reconstruct(args)
    return EXIT_IO  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
