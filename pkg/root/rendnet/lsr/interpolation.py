# ABOUTME: Fixed sparse interpolation map from node attributes to fragment attributes
# ABOUTME: Each fragment stores up to three (node, weight) pairs; backward is the exact transpose

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from rendnet.exceptions import ShapeMismatchError
from rendnet.gradkit.ops import scatter_add_rows

SLOTS = 3


@dataclass(frozen=True)
class InterpolationMap:
    """F x n sparse matrix with three entries per row; unused slots carry weight 0."""
    node_ids: np.ndarray  # (F, 3) int
    weights: np.ndarray   # (F, 3) float
    num_nodes: int

    @property
    def num_fragments(self) -> int:
        return len(self.node_ids)

    def forward(self, H: np.ndarray) -> np.ndarray:
        """F[p] = sum_k w[p, k] * H[node_ids[p, k]]."""
        H = np.asarray(H, dtype=float)
        if H.ndim != 2 or H.shape[0] != self.num_nodes:
            raise ShapeMismatchError(f"expected {self.num_nodes} node rows, got shape {H.shape}")
        gathered = H[self.node_ids]
        out = self.weights[:, 0, None] * gathered[:, 0]
        for k in range(1, SLOTS):
            out = out + self.weights[:, k, None] * gathered[:, k]
        return out

    def backward(self, dF: np.ndarray) -> np.ndarray:
        """dH[i] = sum_p w[p, i] * dF[p]."""
        dF = np.asarray(dF, dtype=float)
        if dF.ndim != 2 or dF.shape[0] != self.num_fragments:
            raise ShapeMismatchError(f"expected {self.num_fragments} fragment rows, got shape {dF.shape}")
        # slot-major order
        ids = self.node_ids.T.ravel()
        contributions = (self.weights.T[:, :, None] * dF[None]).reshape(-1, dF.shape[1])
        return scatter_add_rows(ids, contributions, self.num_nodes)

    def relabel_nodes(self, perm: np.ndarray) -> "InterpolationMap":
        return InterpolationMap(np.asarray(perm)[self.node_ids], self.weights.copy(), self.num_nodes)

    def take(self, fragment_order: np.ndarray) -> "InterpolationMap":
        return InterpolationMap(self.node_ids[fragment_order], self.weights[fragment_order], self.num_nodes)

    @classmethod
    def empty(cls, num_nodes: int) -> "InterpolationMap":
        return cls(np.zeros((0, SLOTS), dtype=int), np.zeros((0, SLOTS)), num_nodes)

    @classmethod
    def concatenate(cls, maps: Sequence["InterpolationMap"], node_offsets: Sequence[int], num_nodes: int) -> "InterpolationMap":
        """Block-diagonal union; map i's node ids are shifted by node_offsets[i]."""
        if not maps:
            return cls.empty(num_nodes)
        ids = np.concatenate([m.node_ids + off for m, off in zip(maps, node_offsets)], axis=0)
        weights = np.concatenate([m.weights for m in maps], axis=0)
        return cls(ids, weights, num_nodes)


def pad_provenance(node_ids: np.ndarray, weights: np.ndarray):
    """Pad (F, s) provenance arrays with s < 3 to three slots (repeat the last id, weight 0)."""
    node_ids = np.atleast_2d(np.asarray(node_ids, dtype=int))
    weights = np.atleast_2d(np.asarray(weights, dtype=float))
    missing = SLOTS - node_ids.shape[1]
    if missing > 0:
        node_ids = np.concatenate([node_ids, np.repeat(node_ids[:, -1:], missing, axis=1)], axis=1)
        weights = np.concatenate([weights, np.zeros((len(weights), missing))], axis=1)
    return node_ids, weights
