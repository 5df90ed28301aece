# ABOUTME: RasterPlan bundles fragments, their interpolation map, simplices and kNN neighborhoods
# ABOUTME: Built once per document and shared by every residual block

import json
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from rendnet.exceptions import DegenerateGeometryError, DegenerateTriangulationError
from rendnet.hypergraph import HSurface, Hypergraph, SurfaceChart
from rendnet.lsr.delaunay import clip_triangles, delaunay_2d
from rendnet.lsr.fragments import FragmentBlock, chord_fragments, sample_curve_fragments
from rendnet.lsr.grid import knn_neighborhoods
from rendnet.lsr.interpolation import InterpolationMap
from rendnet.lsr.sampling import sample_surface_fragments
from rendnet.models.config import RasterConfig
from rendnet.parsers.canonical_parser import serialize_canonical
from rendnet.utils.serialization import canonical_json, sha256_hex

logger = logging.getLogger(__name__)

DEFAULT_KNN_K = 16
SEED_DECIMALS = 9


@dataclass(frozen=True)
class SimplexTable:
    """Simplices fragments interpolate over.

    `curve_simplices[e]` is edge e's node pair. Per hyperedge, `surface_triangles`
    holds global node-id triples (empty when clipped away) and `surface_chords`
    the node pairs used instead when the members are collinear.
    """
    curve_simplices: np.ndarray
    surface_triangles: Tuple[np.ndarray, ...]
    surface_chords: Tuple[Tuple[Tuple[int, int], ...], ...]

    def relabeled(self, perm: np.ndarray) -> "SimplexTable":
        return SimplexTable(
            perm[self.curve_simplices],
            tuple(perm[t] for t in self.surface_triangles),
            tuple(tuple((int(perm[a]), int(perm[b])) for a, b in chords) for chords in self.surface_chords),
        )


@dataclass(frozen=True)
class RasterPlan:
    node_positions: np.ndarray
    fragments: FragmentBlock
    interpolation: InterpolationMap
    simplices: SimplexTable
    neighborhoods: np.ndarray
    knn_k: int

    @property
    def num_fragments(self) -> int:
        return len(self.fragments)

    @property
    def num_nodes(self) -> int:
        return len(self.node_positions)

    def interpolate_forward(self, H: np.ndarray) -> np.ndarray:
        return self.interpolation.forward(H)

    def interpolate_backward(self, dF: np.ndarray) -> np.ndarray:
        return self.interpolation.backward(dF)

    def relabel_nodes(self, perm) -> "RasterPlan":
        """Plan for the hypergraph whose node i was renamed perm[i]."""
        perm = np.asarray(perm, dtype=int)
        inverse = np.argsort(perm)
        fragments = FragmentBlock(
            self.fragments.positions,
            perm[self.fragments.node_ids],
            self.fragments.weights,
            self.fragments.simplex_ids,
        )
        return RasterPlan(
            node_positions=self.node_positions[inverse],
            fragments=fragments,
            interpolation=self.interpolation.relabel_nodes(perm),
            simplices=self.simplices.relabeled(perm),
            neighborhoods=self.neighborhoods[inverse],
            knn_k=self.knn_k,
        )

    def reorder_fragments(self, order) -> "RasterPlan":
        """Same fragments listed in `order`; neighborhoods are recomputed."""
        order = np.asarray(order, dtype=int)
        fragments = self.fragments.take(order)
        return RasterPlan(
            node_positions=self.node_positions,
            fragments=fragments,
            interpolation=self.interpolation.take(order),
            simplices=self.simplices,
            neighborhoods=knn_neighborhoods(fragments.positions, self.node_positions, self.knn_k),
            knn_k=self.knn_k,
        )


def interpolate_forward(plan: RasterPlan, H: np.ndarray) -> np.ndarray:
    return plan.interpolate_forward(H)


def interpolate_backward(plan: RasterPlan, dF: np.ndarray) -> np.ndarray:
    return plan.interpolate_backward(dF)


def _rounded(value):
    if isinstance(value, float):
        return round(value, SEED_DECIMALS) + 0.0
    if isinstance(value, list):
        return [_rounded(v) for v in value]
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    return value


def sampling_digest(doc) -> str:
    """Digest of the document with coordinates rounded to SEED_DECIMALS places.

    Translated or rescaled copies of a document normalize to the same rounded
    coordinates and so draw the same surface samples.
    """
    return sha256_hex(canonical_json(_rounded(json.loads(serialize_canonical(doc)))))


def _surface_rng(digest: str, seed: int, surface_index: int) -> np.random.Generator:
    words = [int(digest[i:i + 8], 16) for i in range(0, 16, 8)]
    return np.random.default_rng(words + [seed, surface_index])


def _collinear_order(params: np.ndarray) -> np.ndarray:
    """Member order along the line the parameter points lie on."""
    spread = params - params.mean(axis=0)
    _, _, vt = np.linalg.svd(spread, full_matrices=False)
    axis = vt[0]
    if axis[np.argmax(np.abs(axis))] < 0:
        axis = -axis
    return np.argsort(spread @ axis, kind="stable")


def _surface_block(
    graph: Hypergraph,
    hyperedge: HSurface,
    positions: np.ndarray,
    config: RasterConfig,
    rng: np.random.Generator,
    simplex_start: int,
    tol: float,
) -> Tuple[FragmentBlock, np.ndarray, List[Tuple[int, int]]]:
    surface = graph.document.surfaces[hyperedge.surface_id]
    members = np.asarray(hyperedge.members, dtype=int)
    chart = SurfaceChart(surface, tol)
    try:
        local = delaunay_2d(hyperedge.param_coords)
    except DegenerateTriangulationError as e:
        logger.warning(f"Hyperedge {hyperedge.id}: {e}; falling back to chords along the members")
        order = _collinear_order(hyperedge.param_coords)
        block, chords = chord_fragments(members[order], positions, config.spacing, simplex_start)
        return block, np.zeros((0, 3), dtype=int), chords

    local = clip_triangles(chart, hyperedge.param_coords, local)
    block = sample_surface_fragments(
        members, local, positions, chart.area(), config.density, rng, simplex_start=simplex_start,
    )
    return block, members[local], []


def build_raster_plan(graph: Hypergraph, config: Optional[RasterConfig] = None, knn_k: int = DEFAULT_KNN_K,
                      tol: float = 1e-7) -> RasterPlan:
    """Curve fragments per edge, surface fragments per hyperedge, and per-node neighborhoods.

    Randomness comes from the document digest and `config.seed`, so repeated
    builds are bit-identical.
    """
    config = config or RasterConfig()
    positions = graph.positions()

    blocks = [
        sample_curve_fragments(edge, graph.document.curves[edge.curve_id], config.spacing)
        for edge in graph.edges
    ]
    curve_simplices = np.array([e.endpoints for e in graph.edges], dtype=int).reshape(-1, 2)

    digest = sampling_digest(graph.document)
    triangles, chords = [], []
    simplex_start = len(graph.edges)
    for hyperedge in graph.surfaces:
        rng = _surface_rng(digest, config.seed, hyperedge.id)
        block, tris, pairs = _surface_block(graph, hyperedge, positions, config, rng, simplex_start, tol)
        blocks.append(block)
        triangles.append(tris)
        chords.append(tuple(pairs))
        simplex_start += len(tris) + len(pairs)

    fragments = FragmentBlock.concatenate(blocks, graph.dim)
    if len(fragments) == 0:
        raise DegenerateGeometryError("rasterization produced no fragments")
    plan = RasterPlan(
        node_positions=positions,
        fragments=fragments,
        interpolation=InterpolationMap(fragments.node_ids, fragments.weights, graph.num_nodes),
        simplices=SimplexTable(curve_simplices, tuple(triangles), tuple(chords)),
        neighborhoods=knn_neighborhoods(fragments.positions, positions, knn_k),
        knn_k=knn_k,
    )
    logger.debug(f"Raster plan: {plan.num_fragments} fragments over {graph.num_nodes} nodes")
    return plan
