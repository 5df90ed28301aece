# ABOUTME: Document bounding boxes and normalization to a centered box of diagonal 2
# ABOUTME: The returned transform maps normalized results back to document units

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rendnet.exceptions import DegenerateGeometryError
from rendnet.vgdoc.document import BoundingBox, VGDocument

logger = logging.getLogger(__name__)

TARGET_DIAGONAL = 2.0
IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class NormalizationTransform:
    """x_normalized = scale * (x - center)."""
    center: Tuple[float, ...]
    scale: float

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.scale * (np.asarray(points, dtype=float) - np.asarray(self.center))

    def invert(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) / self.scale + np.asarray(self.center)

    @classmethod
    def identity(cls, dim: int) -> "NormalizationTransform":
        return cls(center=(0.0,) * dim, scale=1.0)


def document_bbox(doc: VGDocument) -> BoundingBox:
    """Exact bounding box over every curve and surface of `doc`."""
    return doc.bbox()


def normalize_document(doc: VGDocument) -> Tuple[VGDocument, NormalizationTransform]:
    """Translate and uniformly scale `doc` so its bounding box is centered with diagonal 2."""
    box = document_bbox(doc)
    diagonal = box.diagonal
    if not diagonal > 0.0:
        raise DegenerateGeometryError("degenerate extent")
    center = box.center
    scale = TARGET_DIAGONAL / diagonal
    if abs(scale - 1.0) <= IDENTITY_TOL and float(np.max(np.abs(center))) <= IDENTITY_TOL:
        return doc, NormalizationTransform.identity(doc.dim)
    A = scale * np.eye(doc.dim)
    normalized = doc.mapped(A, -scale * center)
    logger.debug(f"Normalized document: center={center.tolist()} scale={scale:.6g}")
    return normalized, NormalizationTransform(center=tuple(float(c) for c in center), scale=scale)
