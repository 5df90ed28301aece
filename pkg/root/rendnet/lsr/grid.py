# ABOUTME: Uniform spatial hash grid for exact k-nearest-fragment queries
# ABOUTME: Results match brute force, including ties broken by the lower fragment index

import itertools
import logging
from collections import defaultdict
from typing import Dict, List, Tuple

import numpy as np

from rendnet.exceptions import DegenerateGeometryError

logger = logging.getLogger(__name__)

TARGET_PER_CELL = 4


class SpatialGrid:
    """Points bucketed into cubic cells keyed by floor((p - origin) / cell_size)."""

    def __init__(self, points: np.ndarray, cell_size: float = None):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or len(points) == 0:
            raise DegenerateGeometryError("spatial grid needs a non-empty (m, d) point array")
        self.points = points
        self.dim = points.shape[1]
        self.origin = points.min(axis=0)
        extent = float(np.max(points.max(axis=0) - self.origin))
        if cell_size is None:
            cells_per_axis = max(1, int(np.ceil((len(points) / TARGET_PER_CELL) ** (1.0 / self.dim))))
            cell_size = extent / cells_per_axis if extent > 0 else 1.0
        self.cell_size = float(cell_size)

        self.table: Dict[Tuple[int, ...], List[int]] = defaultdict(list)
        keys = self._cell_of(points)
        for index, key in enumerate(map(tuple, keys)):
            self.table[key].append(index)
        self._low = keys.min(axis=0)
        self._high = keys.max(axis=0)

    def _cell_of(self, points: np.ndarray) -> np.ndarray:
        return np.floor((points - self.origin) / self.cell_size).astype(np.int64)

    def _ring(self, center: np.ndarray, radius: int):
        """Cells at Chebyshev distance exactly `radius` from `center`."""
        for offset in itertools.product(range(-radius, radius + 1), repeat=self.dim):
            if max(abs(o) for o in offset) != radius:
                continue
            yield tuple(int(c + o) for c, o in zip(center, offset))

    def query(self, point: np.ndarray, k: int) -> np.ndarray:
        """Indices of the k nearest points to `point`, nearest first, ties by lower index."""
        point = np.asarray(point, dtype=float)
        k = min(k, len(self.points))
        center = self._cell_of(point[None, :])[0]
        span = int(max(np.max(np.abs(center - self._low)), np.max(np.abs(self._high - center))))

        candidates: List[int] = []
        radius = 0
        while True:
            for key in self._ring(center, radius):
                candidates.extend(self.table.get(key, ()))
            if len(candidates) >= k:
                found = self._select(point, candidates, k)
                kth = np.sqrt(self._sq_dist(point, found[-1:])[0])
                # anything outside the visited rings is at least radius * cell_size away
                if kth < radius * self.cell_size:
                    return found
            if radius >= span:
                return self._select(point, candidates, k)
            radius += 1

    def _sq_dist(self, point: np.ndarray, indices) -> np.ndarray:
        diff = self.points[np.asarray(indices, dtype=int)] - point
        return np.sum(diff * diff, axis=1)

    def _select(self, point: np.ndarray, candidates: List[int], k: int) -> np.ndarray:
        indices = np.asarray(candidates, dtype=int)
        order = np.lexsort((indices, self._sq_dist(point, indices)))
        return indices[order[:k]]


def knn_neighborhoods(fragment_positions: np.ndarray, node_positions: np.ndarray, k: int) -> np.ndarray:
    """Per node, the min(k, #fragments) nearest fragment indices as an (n, k') array."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    fragment_positions = np.asarray(fragment_positions, dtype=float)
    if len(fragment_positions) == 0:
        raise DegenerateGeometryError("empty fragment set: nothing to gather neighborhoods from")
    grid = SpatialGrid(fragment_positions)
    node_positions = np.atleast_2d(np.asarray(node_positions, dtype=float))
    width = min(k, len(fragment_positions))
    neighborhoods = np.empty((len(node_positions), width), dtype=int)
    for i, position in enumerate(node_positions):
        neighborhoods[i] = grid.query(position, width)
    return neighborhoods
