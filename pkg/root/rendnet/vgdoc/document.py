# ABOUTME: Immutable vector-graphics document model: curves, surfaces, bounding boxes
# ABOUTME: Every constructor validates its geometric invariants and raises DocumentValidationError

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Iterable, List, Optional, Tuple, Union

import numpy as np

from rendnet.exceptions import DocumentValidationError

Point = Tuple[float, ...]

AXIS_TOL = 1e-9
PLANAR_TOL = 1e-9
TWO_PI = 2.0 * math.pi


class CurveKind(str, Enum):
    """Curve vocabulary; declaration order is the one-hot slot order."""
    LINE = "line"
    ARC = "arc"
    QUAD_BEZIER = "quad_bezier"


class SurfaceKind(str, Enum):
    """Surface vocabulary; declaration order is the one-hot slot order."""
    POLYGON = "polygon"
    DISK = "disk"
    RECT = "rect"


CURVE_KINDS: Tuple[CurveKind, ...] = tuple(CurveKind)
SURFACE_KINDS: Tuple[SurfaceKind, ...] = tuple(SurfaceKind)


def as_point(values, name: str, dim: Optional[int] = None) -> Point:
    """Coerce `values` to a finite 2D/3D coordinate tuple."""
    try:
        coords = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise DocumentValidationError("expected a list of numbers", path=name)
    if len(coords) not in (2, 3):
        raise DocumentValidationError(f"expected 2 or 3 coordinates, got {len(coords)}", path=name)
    if dim is not None and len(coords) != dim:
        raise DocumentValidationError(f"expected {dim} coordinates, got {len(coords)}", path=name)
    if not all(math.isfinite(c) for c in coords):
        raise DocumentValidationError("coordinates must be finite", path=name)
    return coords


def as_scalar(value, name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise DocumentValidationError("expected a number", path=name)
    if not math.isfinite(number):
        raise DocumentValidationError("value must be finite", path=name)
    return number


def vec(p) -> np.ndarray:
    return np.asarray(p, dtype=float)


def _to_tuple(a: np.ndarray) -> Point:
    return tuple(float(x) for x in a)


def _uniform_scale(A: np.ndarray) -> float:
    return float(np.linalg.norm(A[:, 0]))


def _check_axes(ax: Point, ay: Point) -> None:
    a, b = vec(ax), vec(ay)
    if abs(np.dot(a, a) - 1.0) > AXIS_TOL:
        raise DocumentValidationError("axis is not unit length", path="ax")
    if abs(np.dot(b, b) - 1.0) > AXIS_TOL:
        raise DocumentValidationError("axis is not unit length", path="ay")
    if abs(np.dot(a, b)) > AXIS_TOL:
        raise DocumentValidationError("axes are not orthogonal", path="ay")


def _planar_axes(dim: int, ax: Optional[Point], ay: Optional[Point], owner: str) -> Tuple[Optional[Point], Optional[Point]]:
    if dim == 2:
        if ax is not None or ay is not None:
            raise DocumentValidationError(f"2D {owner} takes no plane axes", path="ax")
        return None, None
    if ax is None or ay is None:
        raise DocumentValidationError(f"3D {owner} requires plane axes ax and ay", path="ax" if ax is None else "ay")
    ax, ay = as_point(ax, "ax", 3), as_point(ay, "ay", 3)
    _check_axes(ax, ay)
    return ax, ay


def _default_axes(dim: int, ax: Optional[Point], ay: Optional[Point]) -> Tuple[np.ndarray, np.ndarray]:
    if dim == 2:
        return np.array([1.0, 0.0]), np.array([0.0, 1.0])
    return vec(ax), vec(ay)


def _map_planar_frame(A: np.ndarray, dim: int, ax, ay, start: float = 0.0, sweep: float = 1.0):
    """Image of a circle frame under a similarity; 2D frames fold rotation into the angles."""
    s = _uniform_scale(A)
    e1, e2 = _default_axes(dim, ax, ay)
    u, v = A @ e1, A @ e2
    if A.shape[0] == 2:
        orientation = 1.0 if (u[0] * v[1] - u[1] * v[0]) >= 0 else -1.0
        phi = math.atan2(u[1], u[0])
        return None, None, phi + orientation * start, orientation * sweep, s
    return _to_tuple(u / s), _to_tuple(v / s), start, sweep, s


def _angle_in_range(angle: float, lo: float, hi: float) -> Optional[float]:
    candidate = lo + math.fmod(angle - lo, TWO_PI)
    if candidate < lo:
        candidate += TWO_PI
    return candidate if candidate <= hi else None


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box; min <= max componentwise."""
    min: Point
    max: Point

    def __post_init__(self):
        if len(self.min) != len(self.max) or any(a > b for a, b in zip(self.min, self.max)):
            raise ValueError(f"invalid bounding box {self.min} .. {self.max}")

    @classmethod
    def of_points(cls, points: np.ndarray) -> "BoundingBox":
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(_to_tuple(points.min(axis=0)), _to_tuple(points.max(axis=0)))

    def union(self, other: "BoundingBox") -> "BoundingBox":
        return BoundingBox(
            tuple(min(a, b) for a, b in zip(self.min, other.min)),
            tuple(max(a, b) for a, b in zip(self.max, other.max)),
        )

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (vec(self.min) + vec(self.max))

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(vec(self.max) - vec(self.min)))

    def overlaps(self, other: "BoundingBox", margin: float = 0.0) -> bool:
        return all(
            a_lo - margin <= b_hi and b_lo - margin <= a_hi
            for a_lo, a_hi, b_lo, b_hi in zip(self.min, self.max, other.min, other.max)
        )


class CurveSpec(ABC):
    """Parametric curve on t in [0, 1]."""
    kind: ClassVar[CurveKind]

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def point_at(self, t) -> np.ndarray:
        """Point(s) at parameter(s) t; vectorized over array t."""

    @abstractmethod
    def derivative_at(self, t) -> np.ndarray:
        """dB/dt at parameter(s) t."""

    @abstractmethod
    def bbox(self, t0: float = 0.0, t1: float = 1.0) -> BoundingBox:
        """Exact bounding box of the restriction to [t0, t1]."""

    @abstractmethod
    def mapped(self, A: np.ndarray, b: np.ndarray) -> "CurveSpec":
        """Image under the similarity x -> A x + b."""


@dataclass(frozen=True)
class Line(CurveSpec):
    p0: Point
    p1: Point
    kind: ClassVar[CurveKind] = CurveKind.LINE

    def __post_init__(self):
        object.__setattr__(self, "p0", as_point(self.p0, "p0"))
        object.__setattr__(self, "p1", as_point(self.p1, "p1", len(self.p0)))
        if self.p0 == self.p1:
            raise DocumentValidationError("line start equals line end", path="p1")

    @property
    def dim(self) -> int:
        return len(self.p0)

    def point_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)[..., None]
        return (1.0 - t) * vec(self.p0) + t * vec(self.p1)

    def derivative_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(vec(self.p1) - vec(self.p0), t.shape + (self.dim,)).copy()

    def bbox(self, t0: float = 0.0, t1: float = 1.0) -> BoundingBox:
        return BoundingBox.of_points(self.point_at(np.array([t0, t1])))

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "Line":
        return Line(_to_tuple(A @ vec(self.p0) + b), _to_tuple(A @ vec(self.p1) + b))


@dataclass(frozen=True)
class Arc(CurveSpec):
    """Circular arc: center + radius * (cos(theta) ax + sin(theta) ay), theta = start + sweep * t."""
    center: Point
    radius: float
    start: float
    sweep: float
    ax: Optional[Point] = None
    ay: Optional[Point] = None
    kind: ClassVar[CurveKind] = CurveKind.ARC

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center, "center"))
        radius = as_scalar(self.radius, "radius")
        if radius <= 0:
            raise DocumentValidationError("radius must be positive", path="radius")
        sweep = as_scalar(self.sweep, "sweep")
        if sweep == 0 or abs(sweep) > TWO_PI:
            raise DocumentValidationError("sweep magnitude must lie in (0, 2*pi]", path="sweep")
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "sweep", sweep)
        object.__setattr__(self, "start", as_scalar(self.start, "start"))
        ax, ay = _planar_axes(len(self.center), self.ax, self.ay, "arc")
        object.__setattr__(self, "ax", ax)
        object.__setattr__(self, "ay", ay)

    @property
    def dim(self) -> int:
        return len(self.center)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return _default_axes(self.dim, self.ax, self.ay)

    def angle_at(self, t):
        return self.start + self.sweep * np.asarray(t, dtype=float)

    def point_at(self, t) -> np.ndarray:
        theta = self.angle_at(t)[..., None]
        ax, ay = self.axes()
        return vec(self.center) + self.radius * (np.cos(theta) * ax + np.sin(theta) * ay)

    def derivative_at(self, t) -> np.ndarray:
        theta = self.angle_at(t)[..., None]
        ax, ay = self.axes()
        return self.radius * self.sweep * (-np.sin(theta) * ax + np.cos(theta) * ay)

    def bbox(self, t0: float = 0.0, t1: float = 1.0) -> BoundingBox:
        th0, th1 = float(self.angle_at(t0)), float(self.angle_at(t1))
        lo, hi = min(th0, th1), max(th0, th1)
        angles = [th0, th1]
        ax, ay = self.axes()
        for k in range(self.dim):
            if ax[k] == 0.0 and ay[k] == 0.0:
                continue
            phi = math.atan2(ay[k], ax[k])
            for extreme in (phi, phi + math.pi):
                hit = _angle_in_range(extreme, lo, hi)
                if hit is not None:
                    angles.append(hit)
        theta = np.array(angles)[:, None]
        points = vec(self.center) + self.radius * (np.cos(theta) * ax + np.sin(theta) * ay)
        return BoundingBox.of_points(points)

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "Arc":
        ax, ay, start, sweep, s = _map_planar_frame(A, self.dim, self.ax, self.ay, self.start, self.sweep)
        return Arc(_to_tuple(A @ vec(self.center) + b), self.radius * s, start, sweep, ax, ay)


@dataclass(frozen=True)
class QuadBezier(CurveSpec):
    p0: Point
    p1: Point
    p2: Point
    kind: ClassVar[CurveKind] = CurveKind.QUAD_BEZIER

    def __post_init__(self):
        object.__setattr__(self, "p0", as_point(self.p0, "p0"))
        object.__setattr__(self, "p1", as_point(self.p1, "p1", len(self.p0)))
        object.__setattr__(self, "p2", as_point(self.p2, "p2", len(self.p0)))
        if self.p0 == self.p1 == self.p2:
            raise DocumentValidationError("all control points coincide", path="p2")

    @property
    def dim(self) -> int:
        return len(self.p0)

    def point_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)[..., None]
        s = 1.0 - t
        return s * s * vec(self.p0) + 2.0 * t * s * vec(self.p1) + t * t * vec(self.p2)

    def derivative_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)[..., None]
        return 2.0 * (1.0 - t) * (vec(self.p1) - vec(self.p0)) + 2.0 * t * (vec(self.p2) - vec(self.p1))

    def bbox(self, t0: float = 0.0, t1: float = 1.0) -> BoundingBox:
        params = [t0, t1]
        p0, p1, p2 = vec(self.p0), vec(self.p1), vec(self.p2)
        denom = p0 - 2.0 * p1 + p2
        for k in range(self.dim):
            if denom[k] != 0.0:
                t_star = (p0[k] - p1[k]) / denom[k]
                if t0 < t_star < t1:
                    params.append(t_star)
        return BoundingBox.of_points(self.point_at(np.array(params)))

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "QuadBezier":
        return QuadBezier(*(_to_tuple(A @ vec(p) + b) for p in (self.p0, self.p1, self.p2)))


class SurfaceSpec(ABC):
    """Planar region."""
    kind: ClassVar[SurfaceKind]

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def area(self) -> float: ...

    @abstractmethod
    def bbox(self) -> BoundingBox: ...

    @abstractmethod
    def mapped(self, A: np.ndarray, b: np.ndarray) -> "SurfaceSpec": ...


def _newell_normal(points: np.ndarray) -> np.ndarray:
    normal = np.zeros(3)
    nxt = np.roll(points, -1, axis=0)
    normal[0] = np.sum((points[:, 1] - nxt[:, 1]) * (points[:, 2] + nxt[:, 2]))
    normal[1] = np.sum((points[:, 2] - nxt[:, 2]) * (points[:, 0] + nxt[:, 0]))
    normal[2] = np.sum((points[:, 0] - nxt[:, 0]) * (points[:, 1] + nxt[:, 1]))
    return normal


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(p, q, r, s) -> bool:
    """Closed-segment intersection test for 2D segments pq and rs."""
    d1, d2 = _orient(r, s, p), _orient(r, s, q)
    d3, d4 = _orient(p, q, r), _orient(p, q, s)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    return (
        (d1 == 0 and _on_segment(r, s, p))
        or (d2 == 0 and _on_segment(r, s, q))
        or (d3 == 0 and _on_segment(p, q, r))
        or (d4 == 0 and _on_segment(p, q, s))
    )


def point_in_ring(uv: np.ndarray, ring: np.ndarray) -> bool:
    """Even-odd test of a 2D point against a closed 2D ring."""
    x, y = float(uv[0]), float(uv[1])
    inside = False
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x < x_cross:
                inside = not inside
    return inside


def distance_to_ring(uv: np.ndarray, ring: np.ndarray) -> float:
    a = ring
    b = np.roll(ring, -1, axis=0)
    ab = b - a
    t = np.clip(np.einsum("ij,ij->i", uv - a, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    closest = a + t[:, None] * ab
    return float(np.min(np.linalg.norm(uv - closest, axis=1)))


@dataclass(frozen=True)
class Polygon(SurfaceSpec):
    """Simple polygon given by its vertex ring (first vertex not repeated)."""
    ring: Tuple[Point, ...]
    kind: ClassVar[SurfaceKind] = SurfaceKind.POLYGON

    def __post_init__(self):
        ring = tuple(self.ring)
        if len(ring) < 3:
            raise DocumentValidationError("polygon ring needs at least 3 vertices", path="ring")
        first = as_point(ring[0], "ring[0]")
        points = tuple([first] + [as_point(p, f"ring[{i}]", len(first)) for i, p in enumerate(ring[1:], 1)])
        object.__setattr__(self, "ring", points)
        for i in range(len(points)):
            if points[i] == points[(i + 1) % len(points)]:
                raise DocumentValidationError("ring repeats a vertex", path=f"ring[{(i + 1) % len(points)}]")
        if self.dim == 3:
            coords = vec(points)
            normal = _newell_normal(coords)
            norm = np.linalg.norm(normal)
            if norm == 0.0:
                raise DocumentValidationError("polygon has no plane", path="ring")
            offsets = (coords - coords[0]) @ (normal / norm)
            if np.max(np.abs(offsets)) > PLANAR_TOL * max(1.0, self.bbox().diagonal):
                raise DocumentValidationError("polygon vertices are not coplanar", path="ring")
        planar = self.plane_coords(vec(points))
        n = len(planar)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if segments_intersect(planar[i], planar[(i + 1) % n], planar[j], planar[(j + 1) % n]):
                    raise DocumentValidationError("polygon ring self-intersects", path=f"ring[{j}]")
        if abs(_shoelace(planar)) == 0.0:
            raise DocumentValidationError("polygon has zero area", path="ring")

    @property
    def dim(self) -> int:
        return len(self.ring[0])

    def frame(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Intrinsic frame (origin, e1, e2): e1 along the first ring edge."""
        coords = vec(self.ring)
        origin = coords[0]
        e1 = coords[1] - coords[0]
        e1 = e1 / np.linalg.norm(e1)
        if self.dim == 2:
            return origin, e1, np.array([-e1[1], e1[0]])
        normal = _newell_normal(coords)
        normal = normal / np.linalg.norm(normal)
        return origin, e1, np.cross(normal, e1)

    def plane_coords(self, points: np.ndarray) -> np.ndarray:
        origin, e1, e2 = self.frame()
        rel = np.atleast_2d(points) - origin
        return np.stack([rel @ e1, rel @ e2], axis=-1)

    def plane_offset(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        if self.dim == 2:
            return np.zeros(len(points))
        origin, e1, e2 = self.frame()
        return (points - origin) @ np.cross(e1, e2)

    def area(self) -> float:
        return abs(_shoelace(self.plane_coords(vec(self.ring))))

    def bbox(self) -> BoundingBox:
        return BoundingBox.of_points(vec(self.ring))

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "Polygon":
        return Polygon(tuple(_to_tuple(A @ vec(p) + b) for p in self.ring))


def _shoelace(uv: np.ndarray) -> float:
    x, y = uv[:, 0], uv[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True)
class Disk(SurfaceSpec):
    center: Point
    radius: float
    ax: Optional[Point] = None
    ay: Optional[Point] = None
    kind: ClassVar[SurfaceKind] = SurfaceKind.DISK

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center, "center"))
        radius = as_scalar(self.radius, "radius")
        if radius <= 0:
            raise DocumentValidationError("radius must be positive", path="radius")
        object.__setattr__(self, "radius", radius)
        ax, ay = _planar_axes(len(self.center), self.ax, self.ay, "disk")
        object.__setattr__(self, "ax", ax)
        object.__setattr__(self, "ay", ay)

    @property
    def dim(self) -> int:
        return len(self.center)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return _default_axes(self.dim, self.ax, self.ay)

    def area(self) -> float:
        return math.pi * self.radius ** 2

    def bbox(self) -> BoundingBox:
        ax, ay = self.axes()
        extent = self.radius * np.hypot(ax, ay)
        c = vec(self.center)
        return BoundingBox(_to_tuple(c - extent), _to_tuple(c + extent))

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "Disk":
        ax, ay, _, _, s = _map_planar_frame(A, self.dim, self.ax, self.ay)
        return Disk(_to_tuple(A @ vec(self.center) + b), self.radius * s, ax, ay)


@dataclass(frozen=True)
class Rect(SurfaceSpec):
    """Parallelogram origin + a*u + b*v, (a, b) in [0, 1]^2."""
    origin: Point
    u: Point
    v: Point
    kind: ClassVar[SurfaceKind] = SurfaceKind.RECT

    def __post_init__(self):
        object.__setattr__(self, "origin", as_point(self.origin, "origin"))
        object.__setattr__(self, "u", as_point(self.u, "u", len(self.origin)))
        object.__setattr__(self, "v", as_point(self.v, "v", len(self.origin)))
        u, v = vec(self.u), vec(self.v)
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu == 0.0 or nv == 0.0 or self._cross_norm() <= 1e-12 * nu * nv:
            raise DocumentValidationError("edge vectors are linearly dependent", path="v")

    @property
    def dim(self) -> int:
        return len(self.origin)

    def _cross_norm(self) -> float:
        u, v = vec(self.u), vec(self.v)
        if len(u) == 2:
            return abs(u[0] * v[1] - u[1] * v[0])
        return float(np.linalg.norm(np.cross(u, v)))

    def corners(self) -> np.ndarray:
        o, u, v = vec(self.origin), vec(self.u), vec(self.v)
        return np.stack([o, o + u, o + u + v, o + v])

    def area(self) -> float:
        return self._cross_norm()

    def bbox(self) -> BoundingBox:
        return BoundingBox.of_points(self.corners())

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "Rect":
        return Rect(_to_tuple(A @ vec(self.origin) + b), _to_tuple(A @ vec(self.u)), _to_tuple(A @ vec(self.v)))


Geometry = Union[CurveSpec, SurfaceSpec]


@dataclass(frozen=True)
class VGDocument:
    """Parsed vector graphic: dimension, curves, surfaces and an optional class label."""
    dim: int
    curves: Tuple[CurveSpec, ...] = ()
    surfaces: Tuple[SurfaceSpec, ...] = ()
    label: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "surfaces", tuple(self.surfaces))
        if self.dim not in (2, 3):
            raise DocumentValidationError("dim must be 2 or 3", path="dim")
        if not self.curves and not self.surfaces:
            raise DocumentValidationError("document needs at least one curve or surface", path="curves")
        for group, items in (("curves", self.curves), ("surfaces", self.surfaces)):
            for i, item in enumerate(items):
                if item.dim != self.dim:
                    raise DocumentValidationError(
                        f"geometry has dimension {item.dim}, document has {self.dim}", path=f"{group}[{i}]"
                    )
        if self.label is not None and (isinstance(self.label, bool) or int(self.label) != self.label or self.label < 0):
            raise DocumentValidationError("label must be a non-negative integer", path="label")

    def geometry(self) -> Iterable[Geometry]:
        yield from self.curves
        yield from self.surfaces

    def bbox(self) -> BoundingBox:
        boxes = [g.bbox() for g in self.geometry()]
        box = boxes[0]
        for other in boxes[1:]:
            box = box.union(other)
        return box

    def mapped(self, A: np.ndarray, b: np.ndarray) -> "VGDocument":
        """Image under the similarity x -> A x + b (A may lift 2D into 3D)."""
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        return VGDocument(
            dim=A.shape[0],
            curves=tuple(c.mapped(A, b) for c in self.curves),
            surfaces=tuple(s.mapped(A, b) for s in self.surfaces),
            label=self.label,
        )

    def with_label(self, label: Optional[int]) -> "VGDocument":
        return VGDocument(self.dim, self.curves, self.surfaces, label)


def boundary_curves(surface: SurfaceSpec) -> List[CurveSpec]:
    """Explicit boundary curves of a surface, traversed once around."""
    if isinstance(surface, Rect):
        corners = surface.corners()
        return [Line(_to_tuple(corners[i]), _to_tuple(corners[(i + 1) % 4])) for i in range(4)]
    if isinstance(surface, Disk):
        return [
            Arc(surface.center, surface.radius, 0.0, math.pi, surface.ax, surface.ay),
            Arc(surface.center, surface.radius, math.pi, math.pi, surface.ax, surface.ay),
        ]
    if isinstance(surface, Polygon):
        n = len(surface.ring)
        return [Line(surface.ring[i], surface.ring[(i + 1) % n]) for i in range(n)]
    raise TypeError(f"unknown surface type {type(surface).__name__}")
