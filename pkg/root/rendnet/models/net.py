# ABOUTME: Two-stream residual network: edge-conditioned convolution and hyperedge messages on the vector
# ABOUTME: side, interpolated fragment neighborhoods on the raster side, then a global fragment readout

import logging
from dataclasses import dataclass, field
from typing import Collection, Dict, List, Optional, Tuple

import numpy as np

from rendnet.gradkit import (
    Tape,
    TensorNode,
    add_n,
    batch_norm,
    concat,
    edge_matvec,
    gather,
    gradients_by_name,
    linear,
    relu,
    segment_max,
    segment_mean,
    softmax_cross_entropy,
    sparse_apply,
)
from rendnet.models.batch import GraphBatch, PreparedSample, make_batch, prepare_document
from rendnet.models.config import PipelineConfig
from rendnet.models.params import ModelParams
from rendnet.vgdoc import VGDocument

logger = logging.getLogger(__name__)

Leaves = Dict[str, TensorNode]
STREAMS = ("vector", "raster")


@dataclass
class ForwardContext:
    """Intermediate embeddings of one forward pass, per block."""
    batch: GraphBatch
    embeddings: List[TensorNode] = field(default_factory=list)
    fragment_embeddings: List[TensorNode] = field(default_factory=list)
    pre_activations: List[TensorNode] = field(default_factory=list)
    messages: List[Dict[str, Optional[TensorNode]]] = field(default_factory=list)


def mlp(x: TensorNode, leaves: Leaves, prefix: str, depth: int) -> TensorNode:
    """Linear layers with relu between them, none after the last."""
    for k in range(depth):
        x = linear(x, leaves[f"{prefix}.{k}.W"], leaves[f"{prefix}.{k}.b"])
        if k < depth - 1:
            x = relu(x)
    return x


def embed_inputs(batch: GraphBatch, leaves: Leaves, tape: Tape) -> TensorNode:
    """H0 = positions @ W + b."""
    return linear(tape.constant(batch.positions), leaves["embed.W"], leaves["embed.b"])


def nnconv_message(H: TensorNode, batch: GraphBatch, leaves: Leaves, block: int, depth: int) -> TensorNode:
    """C_i = mean over incoming edges j->i of h_j @ M(e_ji), M from the edge MLP; zero for isolated nodes."""
    tape = H.tape
    hidden = H.shape[1]
    if len(batch.edge_src) == 0:
        return tape.constant(np.zeros((batch.num_nodes, hidden)))
    theta = mlp(tape.constant(batch.edge_features), leaves, f"block{block}.edge_mlp", depth)
    messages = edge_matvec(theta, gather(H, batch.edge_src))
    return segment_mean(messages, batch.edge_dst, batch.num_nodes)


def gcn_message(H: TensorNode, batch: GraphBatch, leaves: Leaves, block: int) -> TensorNode:
    """Plain graph convolution: mean of neighbor embeddings times a shared weight."""
    tape = H.tape
    if len(batch.edge_src) == 0:
        return tape.constant(np.zeros(H.shape))
    mean = segment_mean(gather(H, batch.edge_src), batch.edge_dst, batch.num_nodes)
    return linear(mean, leaves[f"block{block}.gcn.W"])


def hyperedge_aggregate(H: TensorNode, batch: GraphBatch, leaves: Leaves, block: int, depth: int) -> TensorNode:
    """h_S = columnwise max over members of the hyperedge MLP on [h_i, surface one-hot, chart coords]."""
    tape = H.tape
    inputs = concat([gather(H, batch.member_node), tape.constant(batch.member_features)])
    mapped = mlp(inputs, leaves, f"block{block}.hyper_mlp", depth)
    return segment_max(mapped, batch.member_hyperedge, batch.num_hyperedges)


def hyperedge_message(h_surfaces: TensorNode, batch: GraphBatch) -> TensorNode:
    """D_i = mean of h_S over the hyperedges containing i; zero when there are none."""
    return segment_mean(gather(h_surfaces, batch.member_hyperedge), batch.member_node, batch.num_nodes)


def vector_messages(H: TensorNode, batch: GraphBatch, leaves: Leaves, block: int, depth: int,
                    edge_features: bool) -> Tuple[TensorNode, TensorNode]:
    tape = H.tape
    if edge_features:
        C = nnconv_message(H, batch, leaves, block, depth)
    else:
        C = gcn_message(H, batch, leaves, block)
    if batch.num_hyperedges == 0:
        D = tape.constant(np.zeros(H.shape))
    else:
        D = hyperedge_message(hyperedge_aggregate(H, batch, leaves, block, depth), batch)
    return C, D


def raster_message(H: TensorNode, batch: GraphBatch, leaves: Leaves, block: int, depth: int,
                   context: Optional[ForwardContext] = None) -> TensorNode:
    """E_i = columnwise max over i's fragment neighborhood of the raster MLP on [h_p, x_p - x_i]."""
    tape = H.tape
    fragments = sparse_apply(batch.interpolation, H)
    if context is not None:
        context.fragment_embeddings.append(fragments)
    offsets = batch.fragment_positions[batch.nbr_fragment] - batch.positions[batch.nbr_node]
    inputs = concat([gather(fragments, batch.nbr_fragment), tape.constant(offsets)])
    mapped = mlp(inputs, leaves, f"block{block}.raster_mlp", depth)
    return segment_max(mapped, batch.nbr_node, batch.num_nodes)


def residual_block(
    H: TensorNode,
    batch: GraphBatch,
    params: ModelParams,
    leaves: Leaves,
    block: int,
    train: bool,
    zero_streams: Collection[str] = (),
    context: Optional[ForwardContext] = None,
) -> TensorNode:
    """s = H + C + D + E over the active streams, then batch_norm(relu(s))."""
    variant = params.variant
    depth = params.config.mlp_depth
    use_vector = variant.vector_stream and "vector" not in zero_streams
    use_raster = variant.raster_stream and "raster" not in zero_streams

    terms = [H]
    C = D = E = None
    if use_vector:
        C, D = vector_messages(H, batch, leaves, block, depth, variant.edge_features)
        terms += [C, D]
    if use_raster:
        E = raster_message(H, batch, leaves, block, depth, context)
        terms.append(E)
    s = add_n(terms)
    out = batch_norm(
        relu(s), leaves[f"block{block}.bn.gamma"], leaves[f"block{block}.bn.beta"], params.bn_state(block), train,
    )
    if context is not None:
        context.pre_activations.append(s)
        context.messages.append({"C": C, "D": D, "E": E})
        context.embeddings.append(out)
    return out


def global_aggregate(H: TensorNode, batch: GraphBatch, leaves: Leaves, depth: int) -> TensorNode:
    """Per graph, columnwise max over all its fragments of the final MLP on [h_p, x_p]."""
    tape = H.tape
    if batch.num_fragments == 0:
        raise ValueError("global aggregation needs at least one fragment")
    fragments = sparse_apply(batch.interpolation, H)
    inputs = concat([fragments, tape.constant(batch.fragment_positions)])
    mapped = mlp(inputs, leaves, "final.mlp", depth)
    return segment_max(mapped, batch.fragment_graph, batch.num_graphs)


def node_max_readout(H: TensorNode, batch: GraphBatch) -> TensorNode:
    return segment_max(H, batch.node_graph, batch.num_graphs)


def pointnet_readout(batch: GraphBatch, leaves: Leaves, depth: int, tape: Tape) -> TensorNode:
    """Shared MLP on fragment coordinates, max-pooled per graph."""
    mapped = mlp(tape.constant(batch.fragment_positions), leaves, "pointnet", depth)
    return segment_max(mapped, batch.fragment_graph, batch.num_graphs)


def forward(
    params: ModelParams,
    batch: GraphBatch,
    tape: Tape,
    leaves: Optional[Leaves] = None,
    train: bool = False,
    zero_streams: Collection[str] = (),
) -> Tuple[TensorNode, ForwardContext]:
    """Logits (num_graphs, C) for a batch, plus the per-block context."""
    unknown = set(zero_streams) - set(STREAMS)
    if unknown:
        raise ValueError(f"unknown streams {sorted(unknown)}; choose from {STREAMS}")
    leaves = leaves if leaves is not None else params.bind(tape, requires_grad=False)
    config = params.config
    variant = params.variant
    depth = config.mlp_depth
    context = ForwardContext(batch)

    if variant.readout == "pointnet":
        readout = pointnet_readout(batch, leaves, depth, tape)
        return linear(readout, leaves["head.W"], leaves["head.b"]), context

    H = embed_inputs(batch, leaves, tape)
    context.embeddings.append(H)
    for block in range(config.blocks):
        H = residual_block(H, batch, params, leaves, block, train, zero_streams, context)

    if variant.readout == "node_max":
        readout = node_max_readout(H, batch)
    else:
        readout = global_aggregate(H, batch, leaves, depth)

    if variant.readout == "ensemble":
        joint = concat([readout, pointnet_readout(batch, leaves, depth, tape)])
        return mlp(joint, leaves, "ensemble_head", 2), context
    return linear(readout, leaves["head.W"], leaves["head.b"]), context


def batch_loss(params: ModelParams, batch: GraphBatch, train: bool = True) -> Tuple[float, Dict[str, np.ndarray], np.ndarray]:
    """Mean cross-entropy over the batch, gradients by parameter name, and the logits."""
    if batch.labels is None:
        raise ValueError("batch has no labels")
    tape = Tape()
    leaves = params.bind(tape)
    logits, _ = forward(params, batch, tape, leaves, train=train)
    loss = softmax_cross_entropy(logits, batch.labels)
    grads = tape.backward(loss)
    return float(loss.data), gradients_by_name(leaves, grads), logits.data


def predict_batch(params: ModelParams, samples: List[PreparedSample], zero_streams: Collection[str] = ()) -> np.ndarray:
    """Eval-mode logits (len(samples), C)."""
    tape = Tape()
    logits, _ = forward(params, make_batch(samples), tape, train=False, zero_streams=zero_streams)
    return logits.data


def classify(doc: VGDocument, params: ModelParams, config: Optional[PipelineConfig] = None,
             zero_streams: Collection[str] = ()) -> np.ndarray:
    """Eval-mode logits (C,) for one document."""
    config = config or PipelineConfig(model=params.config)
    sample = prepare_document(doc, config)
    return predict_batch(params, [sample], zero_streams)[0]
