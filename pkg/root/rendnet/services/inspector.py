# ABOUTME: Inspection exports for one document: hypergraph text dump, fragment cloud PLY and,
# ABOUTME: given a checkpoint, final-block fragment embeddings reduced by PCA and colored as RGB

import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from sklearn.decomposition import PCA

from rendnet.exceptions import DomainError
from rendnet.gradkit import Tape
from rendnet.hypergraph import dump_hypergraph
from rendnet.models.batch import PreparedSample, make_batch, prepare_document
from rendnet.models.config import ModelConfig, PipelineConfig
from rendnet.models.net import forward
from rendnet.models.params import ModelParams
from rendnet.services.checkpoint_store import Checkpoint, load_checkpoint
from rendnet.utils.ply import write_ply
from rendnet.utils.serialization import atomic_write
from rendnet.vgdoc import VGDocument

logger = logging.getLogger(__name__)


def pca_project(features: np.ndarray, components: int = 3) -> np.ndarray:
    """Project rows onto their leading principal components; missing components are zero."""
    features = np.asarray(features, dtype=float)
    rows, cols = features.shape
    k = min(components, rows, cols)
    out = np.zeros((rows, components))
    if k == 0 or rows < 2:
        return out
    out[:, :k] = PCA(n_components=k, svd_solver="full").fit_transform(features)
    return out


def scale_to_rgb(projected: np.ndarray) -> np.ndarray:
    """Per-channel min-max scaling to integers in [0, 255]; constant channels map to 0."""
    low = projected.min(axis=0)
    span = projected.max(axis=0) - low
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (projected - low) / safe, 0.0)
    return np.clip(np.rint(255.0 * scaled), 0, 255).astype(np.uint8)


def pca_colors(features: np.ndarray) -> np.ndarray:
    return scale_to_rgb(pca_project(features))


def fragment_embeddings(params: ModelParams, sample: PreparedSample) -> np.ndarray:
    """Final-block node embeddings interpolated onto the sample's fragments."""
    if params.variant.readout == "pointnet":
        raise DomainError("the pointnet-only variant has no node embeddings to interpolate")
    _, context = forward(params, make_batch([sample]), Tape(), train=False)
    return sample.plan.interpolate_forward(context.embeddings[-1].data)


def inspect_document(
    doc: VGDocument,
    out_prefix: Union[str, Path],
    checkpoint: Optional[Union[Checkpoint, str, Path]] = None,
    pipeline: Optional[PipelineConfig] = None,
) -> List[Path]:
    """Write the inspection files for `doc` and return their paths."""
    if checkpoint is not None and not isinstance(checkpoint, Checkpoint):
        checkpoint = load_checkpoint(checkpoint)
    if checkpoint is not None:
        pipeline = checkpoint.pipeline
        if pipeline.model.dim != doc.dim:
            raise DomainError(f"checkpoint expects {pipeline.model.dim}D documents, got {doc.dim}D")
    pipeline = pipeline or PipelineConfig(model=ModelConfig(dim=doc.dim))

    prefix = str(out_prefix)
    sample = prepare_document(doc, pipeline)
    written = []

    dump_path = Path(prefix + ".hypergraph.txt")
    atomic_write(dump_path, dump_hypergraph(sample.graph))
    written.append(dump_path)

    cloud_path = Path(prefix + ".fragments.ply")
    write_ply(cloud_path, sample.plan.fragments.positions)
    written.append(cloud_path)

    if checkpoint is not None:
        colors = pca_colors(fragment_embeddings(checkpoint.params, sample))
        feature_path = Path(prefix + ".features.ply")
        write_ply(feature_path, sample.plan.fragments.positions, colors)
        written.append(feature_path)

    logger.info(f"Inspection files: {', '.join(str(p) for p in written)}")
    return written
