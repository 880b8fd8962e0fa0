"""Persistent homology over Z2 of a simplexwise filtration."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from .filtration import Filtration


@dataclass(frozen=True)
class PersistencePair:
    dim: int
    birth: float
    death: float
    pos_simplex: int
    neg_simplex: int | None

    @property
    def persistence(self) -> float:
        return abs(self.death - self.birth)

    @property
    def is_finite(self) -> bool:
        return self.neg_simplex is not None


@dataclass(frozen=True)
class PersistenceDiagram:
    pairs: tuple[PersistencePair, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def in_dim(self, dim: int) -> list[PersistencePair]:
        return [p for p in self.pairs if p.dim == dim]

    def finite(self, dim: int, positive: bool = True) -> list[PersistencePair]:
        """Finite pairs of one dimension, optionally dropping zero-persistence ones."""
        return [p for p in self.pairs if p.dim == dim and p.is_finite
                and (p.death > p.birth or not positive)]

    def essential(self, dim: int | None = None) -> list[PersistencePair]:
        return [p for p in self.pairs
                if not p.is_finite and (dim is None or p.dim == dim)]


def compute_persistence(filtration: Filtration) -> PersistenceDiagram:
    low = kernels.reduce_boundary(filtration.indptr, filtration.indices,
                                  filtration.dims)
    values = filtration.values
    dims = filtration.dims
    negative = np.zeros(len(filtration), dtype=bool)
    paired_pos = np.zeros(len(filtration), dtype=bool)
    pairs = []
    for j in np.flatnonzero(low >= 0).tolist():
        i = int(low[j])
        negative[j] = True
        paired_pos[i] = True
        pairs.append(PersistencePair(int(dims[i]), float(values[i]),
                                     float(values[j]), i, j))
    for i in np.flatnonzero(~negative & ~paired_pos).tolist():
        pairs.append(PersistencePair(int(dims[i]), float(values[i]), math.inf, i, None))
    pairs.sort(key=lambda p: (p.birth, p.pos_simplex))
    return PersistenceDiagram(tuple(pairs))


def betti_numbers(filtration: Filtration, r: float,
                  diagram: PersistenceDiagram | None = None) -> tuple[int, int, int]:
    """(b0, b1, b2) of the sub-complex of simplices with value <= r."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    if diagram is None:
        diagram = compute_persistence(filtration)
    betti = [0, 0, 0]
    for p in diagram.pairs:
        if p.dim <= 2 and p.birth <= r < p.death:
            betti[p.dim] += 1
    return tuple(betti)
