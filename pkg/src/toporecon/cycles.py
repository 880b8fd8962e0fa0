"""Persistent volumes and volume-optimal cycles of 2-dimensional pairs.

For a pair ``(b, d)`` the persistent volume is the smallest set of
tetrahedra that contains the negative simplex, otherwise uses only
tetrahedra entering strictly between the pair's simplices, whose boundary
avoids every triangle entering strictly between them, and whose boundary
still contains the positive triangle.

In a triangulated region of R^3 the boundary-avoidance constraint forces the
volume to be a union of components of the graph whose nodes are tetrahedra
and whose links are triangles entering between ``b`` and ``d``.  The
component of the negative simplex is therefore contained in every feasible
volume and is itself feasible, so a flood fill from the negative simplex is
exact and the optimum is unique.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistency
from .filtration import Filtration
from .persistence import PersistencePair


@dataclass(frozen=True)
class Chain:
    """Z2 chain: a set of simplex ids (of one filtration) of equal dimension."""
    dim: int
    simplices: frozenset

    def __add__(self, other: "Chain") -> "Chain":
        if self.simplices and other.simplices and self.dim != other.dim:
            raise ValueError("cannot add chains of different dimension")
        return Chain(self.dim, self.simplices ^ other.simplices)

    def __len__(self) -> int:
        return len(self.simplices)

    def __bool__(self) -> bool:
        return bool(self.simplices)

    def sorted(self) -> list[int]:
        return sorted(self.simplices)


def chain(filtration: Filtration, ids) -> Chain:
    ids = frozenset(int(i) for i in ids)
    dims = {int(filtration.dims[i]) for i in ids}
    if len(dims) > 1:
        raise ValueError("chain members must share one dimension")
    return Chain(dims.pop() if dims else 0, ids)


def boundary(c: Chain, filtration: Filtration) -> Chain:
    """Z2 sum of the codimension-1 faces of every member."""
    if c.dim < 1:
        raise ValueError("boundary needs a chain of dimension >= 1")
    out: set[int] = set()
    for s in c.simplices:
        out.symmetric_difference_update(filtration.boundary(s).tolist())
    return Chain(c.dim - 1, frozenset(out))


@dataclass(frozen=True)
class PersistentVolume:
    pair: PersistencePair
    volume: Chain
    cycle: Chain


def persistent_volume(filtration: Filtration, pair: PersistencePair) -> PersistentVolume:
    if pair.dim != 2 or pair.neg_simplex is None:
        raise ValueError("persistent volumes exist only for finite 2-dim pairs")
    b, d = pair.pos_simplex, pair.neg_simplex
    volume = {d}
    stack = [d]
    while stack:
        t = stack.pop()
        for tri in filtration.boundary(t).tolist():
            if tri <= b:
                continue
            cof = filtration.cofaces(tri)
            if len(cof) < 2:
                raise InternalInconsistency(
                    f"volume of pair {b}->{d} reaches the hull at triangle {tri}")
            for s in cof.tolist():
                if s == t or s in volume:
                    continue
                if s > d:
                    raise InternalInconsistency(
                        f"volume of pair {b}->{d} needs tetrahedron {s} born after death")
                volume.add(s)
                stack.append(s)
    vol = Chain(3, frozenset(volume))
    cyc = boundary(vol, filtration)
    if b not in cyc.simplices:
        raise InternalInconsistency(f"boundary of volume misses positive triangle {b}")
    return PersistentVolume(pair, vol, cyc)


def volume_optimal_cycle(pv: PersistentVolume, filtration: Filtration | None = None) -> Chain:
    if filtration is None:
        return pv.cycle
    return boundary(pv.volume, filtration)
