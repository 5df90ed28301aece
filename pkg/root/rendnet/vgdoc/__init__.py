"""
Vector-graphics document model and curve geometry.
"""

from .document import (
    CURVE_KINDS,
    SURFACE_KINDS,
    Arc,
    BoundingBox,
    CurveKind,
    CurveSpec,
    Disk,
    Line,
    Point,
    Polygon,
    QuadBezier,
    Rect,
    SurfaceKind,
    SurfaceSpec,
    VGDocument,
    boundary_curves,
)
from .curves import (
    ArcLengthTable,
    arc_length,
    arc_length_inverse,
    curve_tangent,
    equal_arc_length_params,
    eval_curve,
)
from .normalize import NormalizationTransform, document_bbox, normalize_document

__all__ = [
    "CURVE_KINDS",
    "SURFACE_KINDS",
    "Arc",
    "ArcLengthTable",
    "BoundingBox",
    "CurveKind",
    "CurveSpec",
    "Disk",
    "Line",
    "NormalizationTransform",
    "Point",
    "Polygon",
    "QuadBezier",
    "Rect",
    "SurfaceKind",
    "SurfaceSpec",
    "VGDocument",
    "arc_length",
    "arc_length_inverse",
    "boundary_curves",
    "curve_tangent",
    "document_bbox",
    "equal_arc_length_params",
    "eval_curve",
    "normalize_document",
]
