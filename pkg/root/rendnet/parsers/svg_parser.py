# ABOUTME: Importer for a small SVG subset: line, polyline, polygon, rect, circle and path (M L H V Q A Z)
# ABOUTME: Filled shapes become surfaces plus explicit boundary curves; stroked-only shapes become curves

import logging
import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from rendnet.exceptions import DocumentSyntaxError, DocumentValidationError, PathSyntaxError, UnsupportedSvgError
from rendnet.parsers.base import BaseParser
from rendnet.vgdoc import Arc, CurveSpec, Disk, Line, Polygon, QuadBezier, Rect, SurfaceSpec, VGDocument, boundary_curves

logger = logging.getLogger(__name__)

FLATTEN_SAMPLES = 16
IGNORED_ELEMENTS = {"title", "desc", "metadata"}
SHAPE_ELEMENTS = {"line", "polyline", "polygon", "rect", "circle", "path"}
SUPPORTED_COMMANDS = "MmLlHhVvQqAaZz"

_TOKEN = re.compile(
    r"(?P<cmd>[A-Za-z])"
    r"|(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<sep>[\s,]+)"
    r"|(?P<bad>.)"
)
_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _local_name(tag: str) -> str:
    return tag.split("}")[-1]


def tokenize_path(data: str) -> List[Tuple[str, str]]:
    """Split path data into ("cmd" | "num", text) tokens."""
    tokens = []
    for match in _TOKEN.finditer(data):
        kind = match.lastgroup
        if kind == "sep":
            continue
        if kind == "bad":
            raise PathSyntaxError(f"unexpected character {match.group()!r}", len(tokens))
        tokens.append((kind, match.group()))
    return tokens


@dataclass
class _Subpath:
    start: np.ndarray
    curves: List[CurveSpec] = field(default_factory=list)
    closed: bool = False


class _PathReader:
    """Walks path tokens and emits subpaths."""

    def __init__(self, data: str):
        self.tokens = tokenize_path(data)
        self.pos = 0

    def _has_number(self) -> bool:
        return self.pos < len(self.tokens) and self.tokens[self.pos][0] == "num"

    def _number(self) -> float:
        if not self._has_number():
            raise PathSyntaxError("expected a number", self.pos)
        value = float(self.tokens[self.pos][1])
        self.pos += 1
        return value

    def _point(self, current: np.ndarray, relative: bool) -> np.ndarray:
        p = np.array([self._number(), self._number()])
        return current + p if relative else p

    def _flag(self) -> bool:
        offset = self.pos
        value = self._number()
        if value not in (0.0, 1.0):
            raise PathSyntaxError("arc flag must be 0 or 1", offset)
        return value == 1.0

    def subpaths(self) -> List[_Subpath]:
        result: List[_Subpath] = []
        current: Optional[np.ndarray] = None
        subpath: Optional[_Subpath] = None

        while self.pos < len(self.tokens):
            kind, text = self.tokens[self.pos]
            if kind != "cmd":
                raise PathSyntaxError("expected a path command", self.pos)
            if text not in SUPPORTED_COMMANDS:
                raise UnsupportedSvgError(f"unsupported path command {text}", self.pos)
            offset = self.pos
            self.pos += 1
            command, relative = text.upper(), text.islower()

            if command == "Z":
                if subpath is None:
                    raise PathSyntaxError("closepath before moveto", offset)
                self._add_line(subpath, current, subpath.start)
                subpath.closed = True
                current = subpath.start
                subpath = None
                continue

            if command == "M":
                origin = current if current is not None else np.zeros(2)
                current = self._point(origin, relative and current is not None)
                subpath = _Subpath(start=current)
                result.append(subpath)
                command = "L"
                if not self._has_number():
                    continue
            elif current is None:
                raise PathSyntaxError("path data must begin with a moveto", offset)
            elif subpath is None:
                subpath = _Subpath(start=current)
                result.append(subpath)

            while True:
                current = self._segment(command, relative, subpath, current, offset)
                if not self._has_number():
                    break
        return result

    def _segment(self, command: str, relative: bool, subpath: _Subpath, current: np.ndarray, offset: int) -> np.ndarray:
        if command == "L":
            end = self._point(current, relative)
            self._add_line(subpath, current, end)
            return end
        if command == "H":
            x = self._number()
            end = np.array([current[0] + x if relative else x, current[1]])
            self._add_line(subpath, current, end)
            return end
        if command == "V":
            y = self._number()
            end = np.array([current[0], current[1] + y if relative else y])
            self._add_line(subpath, current, end)
            return end
        if command == "Q":
            control = self._point(current, relative)
            end = self._point(current, relative)
            if not (np.array_equal(current, control) and np.array_equal(control, end)):
                subpath.curves.append(QuadBezier(tuple(current), tuple(control), tuple(end)))
            return end
        # A
        rx, ry = abs(self._number()), abs(self._number())
        self._number()  # x-axis rotation has no effect on a circle
        large_arc, sweep_flag = self._flag(), self._flag()
        end = self._point(current, relative)
        if abs(rx - ry) > 1e-9 * max(rx, ry):
            raise UnsupportedSvgError("elliptical arc with rx != ry is not supported", offset)
        if rx == 0.0:
            self._add_line(subpath, current, end)
        elif not np.array_equal(current, end):
            subpath.curves.append(endpoint_arc(current, end, rx, large_arc, sweep_flag))
        return end

    @staticmethod
    def _add_line(subpath: _Subpath, start: np.ndarray, end: np.ndarray) -> None:
        if not np.array_equal(start, end):
            subpath.curves.append(Line(tuple(start), tuple(end)))


def endpoint_arc(p1: np.ndarray, p2: np.ndarray, radius: float, large_arc: bool, sweep_flag: bool) -> Arc:
    """Circular arc from SVG endpoint parameterization; an undersized radius is scaled up."""
    half = 0.5 * (p1 - p2)
    d2 = float(half @ half)
    r = radius
    if d2 > r * r:
        r = math.sqrt(d2)
    coef = math.sqrt(max(0.0, (r * r - d2) / d2))
    if large_arc == sweep_flag:
        coef = -coef
    offset = coef * np.array([half[1], -half[0]])
    center = offset + 0.5 * (p1 + p2)
    a = (half - offset) / r
    b = (-half - offset) / r
    start = math.atan2(a[1], a[0])
    sweep = math.atan2(a[0] * b[1] - a[1] * b[0], a @ b)
    if not sweep_flag and sweep > 0:
        sweep -= 2.0 * math.pi
    elif sweep_flag and sweep < 0:
        sweep += 2.0 * math.pi
    sweep = max(-2.0 * math.pi, min(2.0 * math.pi, sweep))
    return Arc(tuple(center), r, start, sweep)


def _flatten(start: np.ndarray, curves: List[CurveSpec]) -> List[Tuple[float, ...]]:
    ring = [tuple(float(c) for c in start)]
    samples = np.arange(1, FLATTEN_SAMPLES + 1) / FLATTEN_SAMPLES
    for curve in curves:
        if isinstance(curve, Line):
            ring.append(tuple(curve.p1))
        else:
            ring.extend(tuple(p) for p in curve.point_at(samples))
    if len(ring) > 1 and np.allclose(ring[-1], ring[0], rtol=0.0, atol=1e-12):
        ring = ring[:-1]
    return ring


class _SvgImporter:
    def __init__(self):
        self.curves: List[CurveSpec] = []
        self.surfaces: List[SurfaceSpec] = []

    def run(self, root: ET.Element) -> VGDocument:
        if _local_name(root.tag) != "svg":
            raise UnsupportedSvgError(f"unsupported root element {_local_name(root.tag)}")
        counts = {}
        for element in self._children(root):
            name = _local_name(element.tag)
            index = counts.get(name, 0)
            counts[name] = index + 1
            try:
                self._element(name, element)
            except DocumentValidationError as e:
                raise e.under(f"{name}[{index}]") from None
        if not self.curves and not self.surfaces:
            raise DocumentValidationError("svg contains no supported shapes")
        return VGDocument(dim=2, curves=tuple(self.curves), surfaces=tuple(self.surfaces))

    @staticmethod
    def _children(root: ET.Element) -> Iterator[ET.Element]:
        for element in root:
            name = _local_name(element.tag)
            if name in IGNORED_ELEMENTS:
                continue
            if name not in SHAPE_ELEMENTS:
                raise UnsupportedSvgError(f"unsupported element {name}")
            if "transform" in element.attrib:
                raise UnsupportedSvgError(f"unsupported attribute transform on {name}")
            yield element

    @staticmethod
    def _number(element: ET.Element, name: str, default: Optional[float] = None) -> float:
        raw = element.attrib.get(name)
        if raw is None:
            if default is None:
                raise DocumentValidationError("missing attribute", path=name)
            return default
        try:
            return float(raw)
        except ValueError:
            raise DocumentValidationError(f"invalid number {raw!r}", path=name) from None

    @staticmethod
    def _filled(element: ET.Element) -> bool:
        return element.attrib.get("fill", "").strip().lower() != "none"

    @staticmethod
    def _points(element: ET.Element) -> List[Tuple[float, float]]:
        values = [float(v) for v in _NUMBER.findall(element.attrib.get("points", ""))]
        if len(values) % 2 or len(values) < 4:
            raise DocumentValidationError("points needs an even count of at least 4 numbers", path="points")
        return [(values[i], values[i + 1]) for i in range(0, len(values), 2)]

    def _element(self, name: str, element: ET.Element) -> None:
        if name == "line":
            p0 = (self._number(element, "x1", 0.0), self._number(element, "y1", 0.0))
            p1 = (self._number(element, "x2", 0.0), self._number(element, "y2", 0.0))
            self.curves.append(Line(p0, p1))
        elif name in ("polyline", "polygon"):
            points = self._points(element)
            closed = name == "polygon"
            if closed and points[0] == points[-1]:
                points = points[:-1]
            stops = points + [points[0]] if closed else points
            self.curves.extend(Line(a, b) for a, b in zip(stops[:-1], stops[1:]) if a != b)
            if closed and self._filled(element):
                self.surfaces.append(Polygon(tuple(points)))
        elif name == "rect":
            if self._number(element, "rx", 0.0) or self._number(element, "ry", 0.0):
                raise UnsupportedSvgError("rounded rect corners are not supported")
            x, y = self._number(element, "x", 0.0), self._number(element, "y", 0.0)
            rect = Rect((x, y), (self._number(element, "width"), 0.0), (0.0, self._number(element, "height")))
            self._surface_with_boundary(rect, self._filled(element))
        elif name == "circle":
            disk = Disk((self._number(element, "cx", 0.0), self._number(element, "cy", 0.0)), self._number(element, "r"))
            self._surface_with_boundary(disk, self._filled(element))
        else:
            self._path(element)

    def _surface_with_boundary(self, surface: SurfaceSpec, filled: bool) -> None:
        if filled:
            self.surfaces.append(surface)
        self.curves.extend(boundary_curves(surface))

    def _path(self, element: ET.Element) -> None:
        filled = self._filled(element)
        for subpath in _PathReader(element.attrib.get("d", "")).subpaths():
            self.curves.extend(subpath.curves)
            if filled and subpath.closed and subpath.curves:
                ring = _flatten(subpath.start, subpath.curves)
                if len(ring) >= 3:
                    self.surfaces.append(Polygon(tuple(ring)))


def parse_svg(text: str) -> VGDocument:
    """Import an SVG subset as a 2D VGDocument."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        line, column = e.position
        raise DocumentSyntaxError(f"malformed XML: {e}", line=line, column=column) from None
    return _SvgImporter().run(root)


class SvgParser(BaseParser):
    """Parser for `.svg` files."""

    source_format = "svg"

    def parse_text(self, text: str) -> VGDocument:
        return parse_svg(text)
