from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PointCloud:
    """Ordered 3D points; ``ids`` index back into the source the points came from."""
    points: np.ndarray
    ids: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float).reshape(-1, 3)
        if len(pts) == 0:
            raise ValueError("a point cloud needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        ids = self.ids
        if ids is None:
            ids = np.arange(len(pts), dtype=np.int64)
        ids = np.asarray(ids, dtype=np.int64)
        if ids.shape != (len(pts),):
            raise ValueError("ids must have one entry per point")
        ids.setflags(write=False)
        object.__setattr__(self, "ids", ids)

    def __len__(self) -> int:
        return len(self.points)

    def deduplicated(self) -> tuple["PointCloud", np.ndarray]:
        """Merge coincident points, keeping first occurrences in file order.

        Returns the reduced cloud and, for every original point, the index of
        its representative in the reduced cloud.
        """
        _, first, inverse = np.unique(self.points, axis=0, return_index=True,
                                      return_inverse=True)
        inverse = inverse.reshape(-1)
        keep = np.sort(first)
        rank = np.empty(len(first), dtype=np.int64)
        # unique-row order -> position of that row's first occurrence in keep
        rank[np.argsort(first)] = np.arange(len(first))
        mapping = rank[inverse]
        return PointCloud(self.points[keep], self.ids[keep]), mapping

    def subset(self, index) -> "PointCloud":
        index = np.asarray(index, dtype=np.int64)
        return PointCloud(self.points[index], self.ids[index])
