# ABOUTME: Fragment containers and equal-arc-length fragment sampling along curve edges
# ABOUTME: Every fragment records the simplex it came from and its barycentric weights

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from rendnet.hypergraph import HEdge
from rendnet.lsr.interpolation import pad_provenance
from rendnet.vgdoc import CurveSpec, arc_length, equal_arc_length_params, eval_curve


@dataclass(frozen=True)
class Fragment:
    """A single fragment: where it lies and how it interpolates node attributes."""
    position: np.ndarray
    simplex_id: int
    node_ids: Tuple[int, ...]
    weights: Tuple[float, ...]


@dataclass(frozen=True)
class FragmentBlock:
    """Column-oriented fragments: positions (F, d), provenance (F, 3) ids and weights, simplex ids (F,)."""
    positions: np.ndarray
    node_ids: np.ndarray
    weights: np.ndarray
    simplex_ids: np.ndarray

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, index: int) -> Fragment:
        used = self.weights[index] > 0
        used[0] = True
        return Fragment(
            position=self.positions[index],
            simplex_id=int(self.simplex_ids[index]),
            node_ids=tuple(int(i) for i in self.node_ids[index][used]),
            weights=tuple(float(w) for w in self.weights[index][used]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @classmethod
    def empty(cls, dim: int) -> "FragmentBlock":
        return cls(np.zeros((0, dim)), np.zeros((0, 3), dtype=int), np.zeros((0, 3)), np.zeros(0, dtype=int))

    @classmethod
    def concatenate(cls, blocks: Sequence["FragmentBlock"], dim: int) -> "FragmentBlock":
        blocks = [b for b in blocks if len(b)]
        if not blocks:
            return cls.empty(dim)
        return cls(
            np.concatenate([b.positions for b in blocks], axis=0),
            np.concatenate([b.node_ids for b in blocks], axis=0),
            np.concatenate([b.weights for b in blocks], axis=0),
            np.concatenate([b.simplex_ids for b in blocks], axis=0),
        )

    def take(self, order: np.ndarray) -> "FragmentBlock":
        return FragmentBlock(self.positions[order], self.node_ids[order], self.weights[order], self.simplex_ids[order])


def fragment_count(length: float, spacing: float) -> int:
    """ceil(L / spacing) + 1, never fewer than two."""
    return max(1, math.ceil(length / spacing)) + 1


def sample_curve_fragments(edge: HEdge, curve: CurveSpec, spacing: float) -> FragmentBlock:
    """Fragments at equal arc-length steps over the edge's parameter range.

    Weights are linear in arc length between the edge's two endpoint nodes, so
    the k-th of n steps carries (1 - k/n, k/n).
    """
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    t0, t1 = edge.t_range
    count = fragment_count(arc_length(curve, t0, t1), spacing)
    params, _ = equal_arc_length_params(curve, t0, t1, count)

    steps = count - 1
    frac = np.arange(count, dtype=float) / steps
    weights = np.stack([1.0 - frac, frac], axis=1)
    ids = np.tile(np.asarray(edge.endpoints, dtype=int), (count, 1))
    ids, weights = pad_provenance(ids, weights)
    return FragmentBlock(
        positions=eval_curve(curve, params),
        node_ids=ids,
        weights=weights,
        simplex_ids=np.full(count, edge.id, dtype=int),
    )


def chord_fragments(
    node_ids: Sequence[int],
    positions: np.ndarray,
    spacing: float,
    simplex_start: int,
) -> Tuple[FragmentBlock, List[Tuple[int, int]]]:
    """Fragments along straight chords between consecutive nodes of a collinear member set.

    Used when a surface's members admit no triangulation. Returns the block and
    the chord node pairs, one simplex each starting at `simplex_start`.
    """
    blocks = []
    chords = []
    for k, (a, b) in enumerate(zip(node_ids[:-1], node_ids[1:])):
        pa, pb = positions[a], positions[b]
        count = fragment_count(float(np.linalg.norm(pb - pa)), spacing)
        frac = np.arange(count, dtype=float) / (count - 1)
        weights = np.stack([1.0 - frac, frac], axis=1)
        ids, weights = pad_provenance(np.tile([a, b], (count, 1)), weights)
        blocks.append(FragmentBlock(
            positions=(1.0 - frac)[:, None] * pa + frac[:, None] * pb,
            node_ids=ids,
            weights=weights,
            simplex_ids=np.full(count, simplex_start + k, dtype=int),
        ))
        chords.append((int(a), int(b)))
    return FragmentBlock.concatenate(blocks, positions.shape[1]), chords
