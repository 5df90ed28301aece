# ABOUTME: Prepares documents (hypergraph + raster plan) and packs several into one disjoint-union batch
# ABOUTME: Node, edge, hyperedge and fragment ids are shifted by per-graph offsets

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from rendnet.hypergraph import Hypergraph, build_hypergraph
from rendnet.lsr import InterpolationMap, RasterPlan, build_raster_plan
from rendnet.models.config import PipelineConfig
from rendnet.models.params import SURFACE_FEATURES, edge_feature_width
from rendnet.vgdoc import VGDocument

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreparedSample:
    graph: Hypergraph
    plan: RasterPlan
    label: Optional[int] = None


def prepare_document(doc: VGDocument, config: Optional[PipelineConfig] = None) -> PreparedSample:
    """Hypergraph and raster plan for one document."""
    config = config or PipelineConfig()
    graph = build_hypergraph(doc, config.hypergraph)
    plan = build_raster_plan(graph, config.raster, knn_k=config.model.knn_k, tol=config.hypergraph.tol)
    return PreparedSample(graph, plan, doc.label)


@dataclass(frozen=True)
class GraphBatch:
    """Several hypergraphs laid side by side.

    Directed edges carry the features of their traversal direction; hyperedge
    membership rows carry [surface one-hot, chart coordinates]; neighborhoods
    are flattened into (node, fragment) pairs.
    """
    num_graphs: int
    dim: int
    positions: np.ndarray
    node_graph: np.ndarray
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_features: np.ndarray
    num_hyperedges: int
    member_node: np.ndarray
    member_hyperedge: np.ndarray
    member_features: np.ndarray
    interpolation: InterpolationMap
    fragment_positions: np.ndarray
    fragment_graph: np.ndarray
    nbr_node: np.ndarray
    nbr_fragment: np.ndarray
    labels: Optional[np.ndarray] = None

    @property
    def num_nodes(self) -> int:
        return len(self.positions)

    @property
    def num_fragments(self) -> int:
        return len(self.fragment_positions)


def _directed_edges(graph: Hypergraph, offset: int, dim: int):
    src, dst, feats = [], [], []
    for edge in graph.edges:
        a, b = edge.endpoints
        src += [a + offset, b + offset]
        dst += [b + offset, a + offset]
        feats += [edge.features, edge.reversed_features]
    width = edge_feature_width(dim)
    return src, dst, (np.stack(feats) if feats else np.zeros((0, width)))


def make_batch(samples: Sequence[PreparedSample]) -> GraphBatch:
    if not samples:
        raise ValueError("cannot batch zero samples")
    dim = samples[0].graph.dim
    if any(s.graph.dim != dim for s in samples):
        raise ValueError("all samples in a batch must share one dimension")

    positions, node_graph = [], []
    edge_src, edge_dst, edge_feats = [], [], []
    member_node, member_hyperedge, member_feats = [], [], []
    maps, node_offsets = [], []
    frag_pos, frag_graph = [], []
    nbr_node, nbr_frag = [], []
    node_offset = hyper_offset = frag_offset = 0

    for g, sample in enumerate(samples):
        graph, plan = sample.graph, sample.plan
        n = graph.num_nodes
        positions.append(graph.positions())
        node_graph.append(np.full(n, g, dtype=int))

        src, dst, feats = _directed_edges(graph, node_offset, dim)
        edge_src += src
        edge_dst += dst
        edge_feats.append(feats)

        for hyperedge in graph.surfaces:
            for member, coords in zip(hyperedge.members, hyperedge.param_coords):
                member_node.append(member + node_offset)
                member_hyperedge.append(hyperedge.id + hyper_offset)
                member_feats.append(np.concatenate([hyperedge.type_onehot, coords]))

        maps.append(plan.interpolation)
        node_offsets.append(node_offset)
        frag_pos.append(plan.fragments.positions)
        frag_graph.append(np.full(plan.num_fragments, g, dtype=int))

        width = plan.neighborhoods.shape[1]
        nbr_node.append(np.repeat(np.arange(n), width) + node_offset)
        nbr_frag.append(plan.neighborhoods.reshape(-1) + frag_offset)

        node_offset += n
        hyper_offset += len(graph.surfaces)
        frag_offset += plan.num_fragments

    labels = None
    if all(s.label is not None for s in samples):
        labels = np.array([s.label for s in samples], dtype=int)

    return GraphBatch(
        num_graphs=len(samples),
        dim=dim,
        positions=np.concatenate(positions, axis=0),
        node_graph=np.concatenate(node_graph),
        edge_src=np.array(edge_src, dtype=int),
        edge_dst=np.array(edge_dst, dtype=int),
        edge_features=np.concatenate(edge_feats, axis=0),
        num_hyperedges=hyper_offset,
        member_node=np.array(member_node, dtype=int),
        member_hyperedge=np.array(member_hyperedge, dtype=int),
        member_features=np.array(member_feats).reshape(-1, SURFACE_FEATURES),
        interpolation=InterpolationMap.concatenate(maps, node_offsets, node_offset),
        fragment_positions=np.concatenate(frag_pos, axis=0),
        fragment_graph=np.concatenate(frag_graph),
        nbr_node=np.concatenate(nbr_node),
        nbr_fragment=np.concatenate(nbr_frag),
        labels=labels,
    )
