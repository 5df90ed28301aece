# ABOUTME: Configuration models for hypergraph construction, rasterization, the network and training
# ABOUTME: Every knob has a validated default; invalid values raise pydantic ValidationError

from pydantic import BaseModel, Field, validator
from typing import List, Optional
import logging

from rendnet.models.registry import normalize_mode

logger = logging.getLogger(__name__)

SYMBOL_CLASSES = [
    "square_round_hole",
    "square_stadium_hole",
    "t_junction_touching",
    "t_junction_gap",
    "triangle_with_disk",
    "l_shape",
    "bezier_arch",
    "cross_in_disk",
]


class HypergraphConfig(BaseModel):
    """Controls for turning a document into a hypergraph"""

    tol: float = Field(
        default=1e-7,
        gt=0.0,
        le=1e-2,
        description="Merge tolerance for nodes and intersections, in normalized units"
    )

    normalize: bool = Field(
        default=True,
        description="Center the document and scale its bounding-box diagonal to 2 first"
    )


class RasterConfig(BaseModel):
    """Controls for latent space rasterization"""

    spacing: float = Field(
        default=2.0 / 256.0,
        gt=0.0,
        description="Arc-length spacing of curve fragments"
    )

    density: float = Field(
        default=512.0,
        gt=0.0,
        description="Surface fragments per unit area"
    )

    seed: int = Field(
        default=0,
        ge=0,
        description="Seed mixed with the document digest for surface sampling"
    )


class ModelConfig(BaseModel):
    """Network shape and ablation variant"""

    hidden: int = Field(default=32, ge=4, le=512, description="Hidden width d_h")
    blocks: int = Field(default=3, ge=1, le=16, description="Number of two-stream residual blocks")
    knn_k: int = Field(default=16, ge=1, description="Fragments gathered per node by the raster stream")
    mlp_depth: int = Field(default=2, ge=1, le=8, description="Layers per MLP")
    num_classes: int = Field(default=8, ge=2, description="Classifier output count")
    mode: str = Field(default="full", description="Ablation variant id, see models.registry")
    seed: int = Field(default=0, ge=0, description="Parameter initialization seed")
    dim: int = Field(default=2, ge=2, le=3, description="Coordinate dimension of the documents")

    @validator('mode')
    def validate_mode(cls, v):
        """Store the canonical variant id"""
        return normalize_mode(v)


class PipelineConfig(BaseModel):
    """Everything that determines a model's forward pass on a document"""

    hypergraph: HypergraphConfig = Field(default_factory=HypergraphConfig)
    raster: RasterConfig = Field(default_factory=RasterConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)


class TrainConfig(BaseModel):
    """Training run settings"""

    pipeline: PipelineConfig = Field(default_factory=PipelineConfig)
    epochs: int = Field(default=60, ge=1, description="Passes over the training split")
    batch_size: int = Field(default=32, ge=2, description="Documents per minibatch; batch norm needs two or more")
    lr: float = Field(default=1e-3, gt=0.0, description="Adam learning rate")
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)
    seed: int = Field(default=1, ge=0, description="Shuffling seed")
    data_dir: str = Field(default="data/synth", description="Dataset root containing manifest.json")
    train_split: str = Field(default="train")
    test_split: str = Field(default="test")
    out_path: str = Field(default="ckpt.rnd", description="Best checkpoint destination")
    log_path: Optional[str] = Field(default=None, description="Metrics CSV destination; defaults next to the checkpoint")
    workers: int = Field(default=1, ge=1, description="Threads for data preparation")


class SynthSpec(BaseModel):
    """Synthetic symbol dataset shape"""

    classes: List[str] = Field(default_factory=lambda: list(SYMBOL_CLASSES))
    train: int = Field(default=1600, ge=1, description="Training documents, balanced over classes")
    test: int = Field(default=400, ge=1, description="Test documents, balanced over classes")
    seed: int = Field(default=7, ge=0)
    dim3: bool = Field(default=False, description="Also emit train3d/test3d splits placed on random planes")
    scale_jitter: float = Field(default=0.05, ge=0.0, lt=0.5)
    rotation_jitter_deg: float = Field(default=5.0, ge=0.0, le=180.0)
    vertex_jitter: float = Field(default=0.02, ge=0.0, lt=0.2)

    @validator('classes')
    def validate_classes(cls, v):
        """At least two known, distinct classes"""
        if len(v) < 2:
            raise ValueError("a dataset needs at least 2 classes")
        unknown = [c for c in v if c not in SYMBOL_CLASSES]
        if unknown:
            raise ValueError(f"unknown symbol classes: {unknown}")
        if len(set(v)) != len(v):
            raise ValueError("class names must be distinct")
        return v
