"""
Model configuration, variant registry, parameters and the two-stream network.

Only the configuration layer is imported eagerly; import `rendnet.models.net`
for the forward pass.
"""

from .config import (
    HypergraphConfig,
    ModelConfig,
    PipelineConfig,
    RasterConfig,
    SynthSpec,
    TrainConfig,
)
from .registry import VARIANTS, VariantInfo, get_variant, normalize_mode, resolve_modes

__all__ = [
    "HypergraphConfig",
    "ModelConfig",
    "PipelineConfig",
    "RasterConfig",
    "SynthSpec",
    "TrainConfig",
    "VARIANTS",
    "VariantInfo",
    "get_variant",
    "normalize_mode",
    "resolve_modes",
]
