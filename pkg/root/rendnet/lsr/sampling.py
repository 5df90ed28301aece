"""
Surface fragment sampling by weighted sample elimination.

Candidates are drawn uniformly by area over a surface's retained triangles and
then thinned to the target count: the candidate whose neighbors crowd it the
most is removed repeatedly, neighbor weights being (1 - d / 2r)^8 for every
neighbor closer than 2r. What survives is an approximate Poisson-disk set.
"""
import heapq
import logging

import numpy as np
from scipy.spatial import cKDTree

from rendnet.exceptions import DegenerateGeometryError
from rendnet.lsr.fragments import FragmentBlock

logger = logging.getLogger(__name__)

MIN_SURFACE_FRAGMENTS = 8
OVERSAMPLING = 4
WEIGHT_EXPONENT = 8


class SampleEliminator:
    """
    Thin a candidate point set down to a target size.

    Parameters
    ----------
    candidates : np.ndarray
        The (m, d) candidate positions.
    radius : float
        Poisson-disk radius r; neighbors interact within 2r.
    """
    def __init__(self, candidates, radius, exponent=WEIGHT_EXPONENT):
        self.candidates = np.asarray(candidates, dtype=float)
        self.radius = float(radius)
        self.exponent = exponent
        self.tree = cKDTree(self.candidates)

    def _neighbor_weights(self):
        """Symmetric neighbor lists as (sources, targets, weights) sorted by source then target."""
        reach = 2.0 * self.radius
        pairs = self.tree.query_pairs(reach, output_type="ndarray")
        if len(pairs) == 0:
            empty = np.zeros(0, dtype=int)
            return empty, empty, np.zeros(0)
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        dist = np.linalg.norm(self.candidates[pairs[:, 0]] - self.candidates[pairs[:, 1]], axis=1)
        weight = (1.0 - np.minimum(dist / reach, 1.0)) ** self.exponent
        sources = np.concatenate([pairs[:, 0], pairs[:, 1]])
        targets = np.concatenate([pairs[:, 1], pairs[:, 0]])
        weights = np.concatenate([weight, weight])
        order = np.lexsort((targets, sources))
        return sources[order], targets[order], weights[order]

    def eliminate(self, target):
        """
        Remove the most crowded candidate until `target` remain.

        Parameters
        ----------
        target : int
            Number of samples to keep.

        Returns
        -------
        np.ndarray
            Ascending indices of the kept candidates.
        """
        m = len(self.candidates)
        if target >= m:
            return np.arange(m)
        sources, targets, weights = self._neighbor_weights()
        starts = np.searchsorted(sources, np.arange(m + 1))
        totals = np.zeros(m)
        np.add.at(totals, sources, weights)

        heap = [(-totals[i], i) for i in range(m)]
        heapq.heapify(heap)
        alive = np.ones(m, dtype=bool)
        remaining = m
        while remaining > target:
            neg_weight, i = heapq.heappop(heap)
            if not alive[i] or -neg_weight != totals[i]:
                continue
            alive[i] = False
            remaining -= 1
            for slot in range(starts[i], starts[i + 1]):
                j = targets[slot]
                if alive[j]:
                    totals[j] -= weights[slot]
                    heapq.heappush(heap, (-totals[j], int(j)))
        return np.nonzero(alive)[0]


def triangle_areas(corners: np.ndarray) -> np.ndarray:
    """Areas of (T, 3, d) triangles in any dimension."""
    u = corners[:, 1] - corners[:, 0]
    v = corners[:, 2] - corners[:, 0]
    uu = np.einsum("ij,ij->i", u, u)
    vv = np.einsum("ij,ij->i", v, v)
    uv = np.einsum("ij,ij->i", u, v)
    return 0.5 * np.sqrt(np.maximum(uu * vv - uv * uv, 0.0))


def target_count(area: float, density: float) -> int:
    return max(MIN_SURFACE_FRAGMENTS, int(round(density * area)))


def sample_surface_fragments(
    members: np.ndarray,
    triangles: np.ndarray,
    node_positions: np.ndarray,
    area: float,
    density: float,
    rng: np.random.Generator,
    simplex_start: int = 0,
) -> FragmentBlock:
    """Approximate Poisson-disk fragments over a surface's retained triangles.

    `members` are the hyperedge's global node ids, `triangles` index into
    `members`, and `area` is the surface's world area. The k-th triangle is
    simplex `simplex_start + k`. Each fragment's position is exactly the
    barycentric combination of its triangle's node positions.
    """
    if density <= 0:
        raise ValueError(f"density must be positive, got {density}")
    if area <= 0:
        raise DegenerateGeometryError("degenerate surface: zero area")
    triangles = np.asarray(triangles, dtype=int).reshape(-1, 3)
    dim = node_positions.shape[1]
    if len(triangles) == 0:
        return FragmentBlock.empty(dim)

    tri_nodes = np.asarray(members, dtype=int)[triangles]
    corners = node_positions[tri_nodes]
    areas = triangle_areas(corners)
    if areas.sum() <= 0:
        raise DegenerateGeometryError("degenerate surface: retained triangles have zero area")

    n_target = target_count(area, density)
    n_candidates = OVERSAMPLING * n_target
    chosen = rng.choice(len(triangles), size=n_candidates, p=areas / areas.sum())
    r1, r2 = rng.random((2, n_candidates))
    root = np.sqrt(r1)
    bary = np.stack([1.0 - root, root * (1.0 - r2), root * r2], axis=1)
    positions = np.einsum("fk,fkd->fd", bary, corners[chosen])

    radius = np.sqrt(area / (n_target * np.sqrt(3.0)))
    kept = SampleEliminator(positions, radius).eliminate(n_target)
    logger.debug(f"Surface sampling kept {len(kept)} of {n_candidates} candidates (r={radius:.4g})")
    return FragmentBlock(
        positions=positions[kept],
        node_ids=tri_nodes[chosen[kept]],
        weights=bary[kept],
        simplex_ids=simplex_start + chosen[kept],
    )
