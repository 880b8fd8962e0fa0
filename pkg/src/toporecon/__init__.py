"""Topology-aware reconstruction of closed surfaces from point clouds."""
from ._accel import BACKEND
from .cycles import Chain, PersistentVolume, persistent_volume, volume_optimal_cycle
from .delaunay import DelaunayComplex, delaunay3
from .errors import (AmbiguousSignificance, DegenerateInput, EmptiedVolume, EmptyDiagram,
                     EmptyFile, EmptySubset, InternalInconsistency, NotManifold, ParseError,
                     ReconstructionError, ReconstructionWarning, SimplificationBlocked,
                     ZeroWeight)
from .filtration import Filtration, alpha_filtration
from .fitting import FitReport, fit, lspia_step, neighbor_subset
from .io import load_point_cloud, read_off, write_off
from .mesh import SurfaceMesh, clean_cycle, clean_volume, find_nonmanifold_edges, find_nonmanifold_vertices
from .pd_analysis import SignificanceSplit, project_persistence, split_significant
from .persistence import PersistenceDiagram, PersistencePair, betti_numbers, compute_persistence
from .pipeline import PipelineConfig, ReconstructionResult, export_outputs, reconstruct
from .pointcloud import PointCloud
from .qem import qem_simplify
from .subdivision import SubdivisionBasis, loop_subdivide

__version__ = "0.1.0"
