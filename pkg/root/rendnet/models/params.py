# ABOUTME: Parameter layout and initialization for every model variant
# ABOUTME: Glorot-uniform weights drawn per (seed, parameter name), zero biases except the edge MLP output, unit batch-norm scale

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from rendnet.gradkit import BatchNormState, ParamStore, Tape, TensorNode
from rendnet.models.config import ModelConfig
from rendnet.models.registry import VariantInfo, get_variant
from rendnet.utils.serialization import sha256_hex

logger = logging.getLogger(__name__)

EDGE_MLP_NOISE = 1e-2
SURFACE_FEATURES = 5  # surface type one-hot (3) + chart coordinates (2)


def edge_feature_width(dim: int) -> int:
    """Start direction, end direction and the curve-type one-hot."""
    return 2 * dim + 3


def glorot_limit(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def _rng_for(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, int(sha256_hex(name)[:8], 16)])


def mlp_widths(width_in: int, hidden: int, width_out: int, depth: int) -> List[int]:
    return [width_in] + [hidden] * (depth - 1) + [width_out]


def mlp_layout(prefix: str, width_in: int, hidden: int, width_out: int, depth: int) -> List[Tuple[str, int, int]]:
    widths = mlp_widths(width_in, hidden, width_out, depth)
    return [(f"{prefix}.{k}", widths[k], widths[k + 1]) for k in range(depth)]


def parameter_layout(config: ModelConfig) -> List[Tuple[str, int, int]]:
    """(layer name, fan_in, fan_out) for every linear layer the variant uses, in a fixed order."""
    variant = get_variant(config.mode)
    d, h, depth = config.dim, config.hidden, config.mlp_depth
    layers: List[Tuple[str, int, int]] = []

    if variant.readout != "pointnet":
        layers.append(("embed", d, h))
        for block in range(config.blocks):
            if variant.vector_stream:
                if variant.edge_features:
                    layers += mlp_layout(f"block{block}.edge_mlp", edge_feature_width(d), h, h * h, depth)
                else:
                    layers.append((f"block{block}.gcn", h, h))
                layers += mlp_layout(f"block{block}.hyper_mlp", h + SURFACE_FEATURES, h, h, depth)
            if variant.raster_stream:
                layers += mlp_layout(f"block{block}.raster_mlp", h + d, h, h, depth)
        if variant.readout in ("global", "ensemble"):
            layers += mlp_layout("final.mlp", h + d, h, h, depth)

    if variant.readout in ("ensemble", "pointnet"):
        layers += mlp_layout("pointnet", d, h, h, depth)
    if variant.readout == "ensemble":
        layers += mlp_layout("ensemble_head", 2 * h, h, config.num_classes, 2)
    else:
        layers.append(("head", h, config.num_classes))
    return layers


def _has_bias(layer: str) -> bool:
    return not layer.endswith(".gcn")


@dataclass
class ModelParams:
    """Trainable tensors plus batch-norm running statistics for one model configuration."""
    config: ModelConfig
    store: ParamStore

    @property
    def variant(self) -> VariantInfo:
        return get_variant(self.config.mode)

    def bind(self, tape: Tape, requires_grad: bool = True) -> Dict[str, TensorNode]:
        return self.store.bind(tape, requires_grad=requires_grad)

    def bn_state(self, block: int) -> BatchNormState:
        return self.store.bn_states[f"block{block}.bn"]

    def tensors(self) -> Dict[str, np.ndarray]:
        """Every named array, batch-norm running statistics included."""
        named = dict(self.store.items())
        for name, state in self.store.bn_states.items():
            named[f"{name}.running_mean"] = state.running_mean
            named[f"{name}.running_var"] = state.running_var
        return named

    def load_tensors(self, tensors: Dict[str, np.ndarray]) -> None:
        for name, state in self.store.bn_states.items():
            state.running_mean = np.array(tensors[f"{name}.running_mean"], dtype=np.float64)
            state.running_var = np.array(tensors[f"{name}.running_var"], dtype=np.float64)
        for name in list(self.store.names()):
            self.store[name] = tensors[name]

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.tensors().values())


def init_params(config: ModelConfig, seed: Optional[int] = None) -> ModelParams:
    """Fresh parameters for `config`; each tensor depends only on (seed, its name).

    Weights are Glorot-uniform and biases zero, with one exception: the last
    layer of each edge MLP gets weights scaled by EDGE_MLP_NOISE and the bias
    I / hidden. Zero edge features then emit exactly the coefficient matrix
    I / hidden, so edge messages start close to a scaled average of neighbor
    embeddings instead of a random projection.
    """
    seed = config.seed if seed is None else seed
    h = config.hidden
    store = ParamStore()
    for layer, fan_in, fan_out in parameter_layout(config):
        limit = glorot_limit(fan_in, fan_out)
        weight = _rng_for(seed, f"{layer}.W").uniform(-limit, limit, size=(fan_in, fan_out))
        bias = np.zeros(fan_out)
        is_edge_output = ".edge_mlp." in layer and fan_out == h * h and layer.endswith(f".{config.mlp_depth - 1}")
        if is_edge_output:
            # coefficient matrix starts at I / d_h for zero edge features
            weight = weight * EDGE_MLP_NOISE
            bias = (np.eye(h) / h).reshape(-1)
        store.add(f"{layer}.W", weight)
        if _has_bias(layer):
            store.add(f"{layer}.b", bias)

    variant = get_variant(config.mode)
    if variant.readout != "pointnet":
        for block in range(config.blocks):
            store.add(f"block{block}.bn.gamma", np.ones(h))
            store.add(f"block{block}.bn.beta", np.zeros(h))
            store.add_batch_norm(f"block{block}.bn", h)

    logger.debug(f"Initialized {len(store)} tensors ({store.num_values()} values) for mode {config.mode}")
    return ModelParams(config, store)
