# ABOUTME: Parser and serializer for the canonical JSON document format
# ABOUTME: serialize(parse(text)) reproduces canonical text byte-for-byte

import json
import logging
from typing import Any, Callable, Dict, List, Optional

from rendnet.exceptions import DocumentSyntaxError, DocumentValidationError
from rendnet.parsers.base import BaseParser
from rendnet.utils.serialization import sha256_hex
from rendnet.vgdoc import Arc, CurveSpec, Disk, Line, Polygon, QuadBezier, Rect, SurfaceSpec, VGDocument

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

_CURVE_FIELDS = {
    "line": ("p0", "p1"),
    "arc": ("center", "radius", "start", "sweep"),
    "quad_bezier": ("p0", "p1", "p2"),
}
_SURFACE_FIELDS = {
    "polygon": ("ring",),
    "disk": ("center", "radius"),
    "rect": ("origin", "u", "v"),
}
_PLANE_AXES = ("ax", "ay")
_TOP_LEVEL = ("version", "dim", "label", "curves", "surfaces")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentValidationError("expected a number", path=path)
    return float(value)


def _coords(value: Any, path: str) -> List[float]:
    if not isinstance(value, list):
        raise DocumentValidationError("expected a list of numbers", path=path)
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _check_fields(record: Dict[str, Any], required, optional, path: str) -> None:
    for name in required:
        if name not in record:
            raise DocumentValidationError(f"missing field '{name}'", path=path)
    allowed = set(required) | set(optional) | {"kind"}
    for name in record:
        if name not in allowed:
            raise DocumentValidationError(f"unknown field '{name}'", path=f"{path}.{name}")


def _optional_coords(record: Dict[str, Any], name: str) -> Optional[List[float]]:
    return _coords(record[name], name) if name in record else None


def _kind(record: Any, table: Dict[str, tuple], what: str, path: str) -> str:
    if not isinstance(record, dict):
        raise DocumentValidationError(f"{what} entry must be an object", path=path)
    kind = record.get("kind")
    if kind not in table:
        raise DocumentValidationError(f"unknown {what} kind {kind!r}", path=f"{path}.kind")
    return kind


def _build(path: str, factory: Callable[[], Any]):
    try:
        return factory()
    except DocumentValidationError as e:
        raise e.under(path) from None


def _curve_from_record(record: Any, path: str) -> CurveSpec:
    kind = _kind(record, _CURVE_FIELDS, "curve", path)
    optional = _PLANE_AXES if kind == "arc" else ()
    _check_fields(record, _CURVE_FIELDS[kind], optional, path)
    if kind == "line":
        return _build(path, lambda: Line(_coords(record["p0"], "p0"), _coords(record["p1"], "p1")))
    if kind == "quad_bezier":
        return _build(path, lambda: QuadBezier(*(_coords(record[k], k) for k in ("p0", "p1", "p2"))))
    return _build(path, lambda: Arc(
        center=_coords(record["center"], "center"),
        radius=_number(record["radius"], "radius"),
        start=_number(record["start"], "start"),
        sweep=_number(record["sweep"], "sweep"),
        ax=_optional_coords(record, "ax"),
        ay=_optional_coords(record, "ay"),
    ))


def _surface_from_record(record: Any, path: str) -> SurfaceSpec:
    kind = _kind(record, _SURFACE_FIELDS, "surface", path)
    optional = _PLANE_AXES if kind == "disk" else ()
    _check_fields(record, _SURFACE_FIELDS[kind], optional, path)
    if kind == "polygon":
        ring = record["ring"]
        if not isinstance(ring, list):
            raise DocumentValidationError("expected a list of points", path=f"{path}.ring")
        return _build(path, lambda: Polygon(tuple(_coords(p, f"ring[{i}]") for i, p in enumerate(ring))))
    if kind == "rect":
        return _build(path, lambda: Rect(*(_coords(record[k], k) for k in ("origin", "u", "v"))))
    return _build(path, lambda: Disk(
        center=_coords(record["center"], "center"),
        radius=_number(record["radius"], "radius"),
        ax=_optional_coords(record, "ax"),
        ay=_optional_coords(record, "ay"),
    ))


def parse_canonical(text: str) -> VGDocument:
    """Parse canonical JSON text into a validated VGDocument."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, line=e.lineno, column=e.colno) from None

    if not isinstance(data, dict):
        raise DocumentValidationError("top level must be an object")
    for name in data:
        if name not in _TOP_LEVEL:
            raise DocumentValidationError(f"unknown field '{name}'", path=name)
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION or isinstance(version, bool):
        raise DocumentValidationError(f"unsupported format version {version!r}", path="version")
    dim = data.get("dim")
    if isinstance(dim, bool) or dim not in (2, 3):
        raise DocumentValidationError("dim must be 2 or 3", path="dim")
    label = data.get("label")
    if label is not None and (isinstance(label, bool) or not isinstance(label, int)):
        raise DocumentValidationError("label must be an integer", path="label")

    curves_data = data.get("curves", [])
    surfaces_data = data.get("surfaces", [])
    if not isinstance(curves_data, list):
        raise DocumentValidationError("expected a list", path="curves")
    if not isinstance(surfaces_data, list):
        raise DocumentValidationError("expected a list", path="surfaces")

    curves = [_curve_from_record(c, f"curves[{i}]") for i, c in enumerate(curves_data)]
    surfaces = [_surface_from_record(s, f"surfaces[{i}]") for i, s in enumerate(surfaces_data)]
    return VGDocument(dim=dim, curves=tuple(curves), surfaces=tuple(surfaces), label=label)


def _float_list(point) -> List[float]:
    return [float(x) for x in point]


def _curve_record(curve: CurveSpec) -> Dict[str, Any]:
    if isinstance(curve, Line):
        return {"kind": "line", "p0": _float_list(curve.p0), "p1": _float_list(curve.p1)}
    if isinstance(curve, QuadBezier):
        return {
            "kind": "quad_bezier",
            "p0": _float_list(curve.p0),
            "p1": _float_list(curve.p1),
            "p2": _float_list(curve.p2),
        }
    record = {
        "kind": "arc",
        "center": _float_list(curve.center),
        "radius": float(curve.radius),
        "start": float(curve.start),
        "sweep": float(curve.sweep),
    }
    if curve.ax is not None:
        record["ax"] = _float_list(curve.ax)
        record["ay"] = _float_list(curve.ay)
    return record


def _surface_record(surface: SurfaceSpec) -> Dict[str, Any]:
    if isinstance(surface, Polygon):
        return {"kind": "polygon", "ring": [_float_list(p) for p in surface.ring]}
    if isinstance(surface, Rect):
        return {
            "kind": "rect",
            "origin": _float_list(surface.origin),
            "u": _float_list(surface.u),
            "v": _float_list(surface.v),
        }
    record = {"kind": "disk", "center": _float_list(surface.center), "radius": float(surface.radius)}
    if surface.ax is not None:
        record["ax"] = _float_list(surface.ax)
        record["ay"] = _float_list(surface.ay)
    return record


def serialize_canonical(doc: VGDocument) -> str:
    """Canonical compact JSON for `doc`; floats keep full round-trip precision."""
    record: Dict[str, Any] = {"version": FORMAT_VERSION, "dim": doc.dim}
    if doc.label is not None:
        record["label"] = int(doc.label)
    record["curves"] = [_curve_record(c) for c in doc.curves]
    record["surfaces"] = [_surface_record(s) for s in doc.surfaces]
    return json.dumps(record, separators=(",", ":"), allow_nan=False)


def document_digest(doc: VGDocument) -> str:
    """SHA-256 of the canonical serialization; identifies a document across runs."""
    return sha256_hex(serialize_canonical(doc))


class CanonicalParser(BaseParser):
    """Parser for canonical `.json` documents."""

    source_format = "canonical"

    def parse_text(self, text: str) -> VGDocument:
        return parse_canonical(text)
