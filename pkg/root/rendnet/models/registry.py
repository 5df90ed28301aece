# ABOUTME: Single source of truth for the model variants used in ablation studies
# ABOUTME: Each variant says which message streams run and how the graph is read out

"""
Variant Registry - centralized ablation configuration.

This module is the SINGLE SOURCE OF TRUTH for:
- Available model variants (the `mode` field of ModelConfig)
- Which residual streams a variant keeps
- The readout each variant uses
- The row order of the ablation report

To add a new variant:
1. Add an entry to VARIANTS with all required fields
2. Add aliases to ALIASES if needed
3. The change propagates to config validation, the CLI `--mode` choices
   and the ablation report
"""

from dataclasses import dataclass
from typing import Dict, List, Optional


@dataclass(frozen=True)
class VariantInfo:
    """Model variant configuration."""
    id: str
    name: str
    description: str
    vector_stream: bool = True
    raster_stream: bool = True
    edge_features: bool = True
    readout: str = "global"  # global | node_max | ensemble | pointnet
    report_order: Optional[int] = None


# ============================================================================
# SINGLE SOURCE OF TRUTH: All model variants
# ============================================================================

VARIANTS: Dict[str, VariantInfo] = {
    "full": VariantInfo(
        id="full",
        name="Full model",
        description="Both streams with edge-conditioned convolution and the global raster readout",
        report_order=5,
    ),
    "vector-only": VariantInfo(
        id="vector-only",
        name="Vector stream only",
        description="Raster message zeroed in every residual block",
        raster_stream=False,
        report_order=1,
    ),
    "raster-only": VariantInfo(
        id="raster-only",
        name="Raster stream only",
        description="Edge and hyperedge messages zeroed in every residual block",
        vector_stream=False,
        report_order=0,
    ),
    "no-edge-features": VariantInfo(
        id="no-edge-features",
        name="No graph edge features",
        description="Edge-conditioned convolution replaced by a plain graph convolution",
        edge_features=False,
        report_order=2,
    ),
    "no-final-block": VariantInfo(
        id="no-final-block",
        name="No final block",
        description="Global max pooling over node embeddings instead of the raster readout",
        readout="node_max",
        report_order=3,
    ),
    "ensemble": VariantInfo(
        id="ensemble",
        name="Ensemble of vector graph and PointNet",
        description="Vector-only readout concatenated with a standalone PointNet over fragments",
        raster_stream=False,
        readout="ensemble",
        report_order=4,
    ),
    "pointnet-only": VariantInfo(
        id="pointnet-only",
        name="PointNet only",
        description="Standalone PointNet over the rasterized fragment cloud with coordinate features",
        vector_stream=False,
        raster_stream=False,
        readout="pointnet",
    ),
}

ALIASES: Dict[str, str] = {
    "rendnet": "full",
    "vector": "vector-only",
    "raster": "raster-only",
    "no-edge": "no-edge-features",
    "gcn": "no-edge-features",
    "no-final": "no-final-block",
    "pointnet": "pointnet-only",
}


# ============================================================================
# Helper functions
# ============================================================================

def get_variant(mode: str) -> Optional[VariantInfo]:
    """Get variant info by id or alias."""
    if mode in VARIANTS:
        return VARIANTS[mode]

    normalized = mode.lower().strip().replace("_", "-")
    if normalized in VARIANTS:
        return VARIANTS[normalized]
    if normalized in ALIASES:
        return VARIANTS[ALIASES[normalized]]
    return None


def normalize_mode(mode: str) -> str:
    """Canonical variant id for `mode`; raises ValueError when unknown."""
    variant = get_variant(mode)
    if variant is None:
        raise ValueError(f"Unknown model variant '{mode}'. Available: {', '.join(VARIANTS)}")
    return variant.id


def report_modes() -> List[str]:
    """Variant ids in ablation report order."""
    ordered = [v for v in VARIANTS.values() if v.report_order is not None]
    return [v.id for v in sorted(ordered, key=lambda v: v.report_order)]


def resolve_modes(spec: str) -> List[str]:
    """Expand a comma-separated mode list; `all` is the report sweep."""
    if spec.strip().lower() == "all":
        return report_modes()
    modes = [normalize_mode(m) for m in spec.split(",") if m.strip()]
    order = {m: i for i, m in enumerate(report_modes())}
    return sorted(dict.fromkeys(modes), key=lambda m: order.get(m, len(order)))
