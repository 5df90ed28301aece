# ABOUTME: Pairwise curve intersection: closed forms for line/arc pairs, box subdivision otherwise
# ABOUTME: Overlapping curves are reported with a warning and contribute their endpoint pairs only

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from rendnet.vgdoc import Arc, CurveSpec, Line, QuadBezier
from rendnet.vgdoc.document import TWO_PI, vec

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-7
MAX_SUBDIVISION_DEPTH = 40
MAX_PENDING_PAIRS = 4096
NEWTON_BOX_DIAGONAL = 1e-3
NEWTON_ITERATIONS = 30
ENDPOINT_SNAP = 1e-10

ParamPair = Tuple[float, float]


def _within(distance: float, tol: float) -> bool:
    return distance <= tol + 1e-14


def _snap(t: float) -> float:
    if t <= ENDPOINT_SNAP:
        return 0.0
    if t >= 1.0 - ENDPOINT_SNAP:
        return 1.0
    return t


def _arc_frame(arc: Arc) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    ax, ay = arc.axes()
    return vec(arc.center), ax, ay


def _locate_angle(arc: Arc, phi: float, tol: float) -> Optional[float]:
    angular_tol = tol / arc.radius
    delta = (phi - arc.start) if arc.sweep > 0 else (arc.start - phi)
    delta = math.fmod(delta, TWO_PI)
    if delta < 0:
        delta += TWO_PI
    span = abs(arc.sweep)
    if delta <= span:
        return delta / span
    if TWO_PI - delta <= angular_tol:
        return 0.0
    if delta - span <= angular_tol:
        return 1.0
    return None


def _closest_on_bezier(curve: QuadBezier, point: np.ndarray) -> float:
    samples = np.linspace(0.0, 1.0, 65)
    t = float(samples[np.argmin(np.linalg.norm(curve.point_at(samples) - point, axis=1))])
    p0, p1, p2 = vec(curve.p0), vec(curve.p1), vec(curve.p2)
    second = 2.0 * (p2 - 2.0 * p1 + p0)
    for _ in range(NEWTON_ITERATIONS):
        diff = curve.point_at(t) - point
        d1 = curve.derivative_at(t)
        g = float(diff @ d1)
        h = float(d1 @ d1 + diff @ second)
        if h <= 0.0:
            break
        t_next = min(1.0, max(0.0, t - g / h))
        if abs(t_next - t) <= 1e-15:
            t = t_next
            break
        t = t_next
    return t


def locate_param(curve: CurveSpec, point: np.ndarray, tol: float) -> Optional[float]:
    """Parameter of the curve point nearest `point`, or None when farther than tol."""
    point = np.asarray(point, dtype=float)
    if isinstance(curve, Line):
        p0, d = vec(curve.p0), vec(curve.p1) - vec(curve.p0)
        t = float(np.clip((point - p0) @ d / (d @ d), 0.0, 1.0))
    elif isinstance(curve, Arc):
        center, ax, ay = _arc_frame(curve)
        rel = point - center
        phi = math.atan2(float(rel @ ay), float(rel @ ax))
        t = _locate_angle(curve, phi, tol)
        if t is None:
            return None
    else:
        t = _closest_on_bezier(curve, point)
    t = _snap(t)
    if not _within(float(np.linalg.norm(curve.point_at(t) - point)), tol):
        return None
    return t


def _merge_pairs(a: CurveSpec, b: CurveSpec, pairs: List[ParamPair], tol: float) -> List[ParamPair]:
    merged: List[ParamPair] = []
    for ta, tb in sorted(pairs):
        duplicate = False
        for ma, mb in merged:
            same_params = abs(ta - ma) <= tol and abs(tb - mb) <= tol
            same_points = (
                _within(float(np.linalg.norm(a.point_at(ta) - a.point_at(ma))), tol)
                and _within(float(np.linalg.norm(b.point_at(tb) - b.point_at(mb))), tol)
            )
            if same_params or same_points:
                duplicate = True
                break
        if not duplicate:
            merged.append((ta, tb))
    return merged


def _endpoint_pairs(a: CurveSpec, b: CurveSpec, tol: float) -> List[ParamPair]:
    pairs = []
    for ta in (0.0, 1.0):
        tb = locate_param(b, a.point_at(ta), tol)
        if tb is not None:
            pairs.append((ta, tb))
    for tb in (0.0, 1.0):
        ta = locate_param(a, b.point_at(tb), tol)
        if ta is not None:
            pairs.append((ta, tb))
    return _merge_pairs(a, b, pairs, tol)


def _shares_segment(a: CurveSpec, b: CurveSpec, pairs: List[ParamPair], tol: float) -> bool:
    ordered = sorted(pairs)
    for (ta0, _), (ta1, _) in zip(ordered[:-1], ordered[1:]):
        if ta1 - ta0 > 1e-12 and locate_param(b, a.point_at(0.5 * (ta0 + ta1)), tol) is not None:
            return True
    return False


def _overlap_result(a: CurveSpec, b: CurveSpec, tol: float) -> Tuple[List[ParamPair], bool]:
    pairs = _endpoint_pairs(a, b, tol)
    return pairs, _shares_segment(a, b, pairs, tol)


def _accept(a: CurveSpec, b: CurveSpec, ta: float, tb: float, tol: float) -> Optional[ParamPair]:
    ta, tb = _snap(ta), _snap(tb)
    if _within(float(np.linalg.norm(a.point_at(ta) - b.point_at(tb))), tol):
        return ta, tb
    return None


def _line_line(a: Line, b: Line, tol: float) -> Tuple[List[ParamPair], bool]:
    d1 = vec(a.p1) - vec(a.p0)
    d2 = vec(b.p1) - vec(b.p0)
    r = vec(a.p0) - vec(b.p0)
    A, E, B = d1 @ d1, d2 @ d2, d1 @ d2
    C, F = d1 @ r, d2 @ r
    denom = A * E - B * B
    if denom <= 1e-14 * A * E:
        offset = r - (r @ d1) / A * d1
        if not _within(float(np.linalg.norm(offset)), tol):
            return [], False
        return _overlap_result(a, b, tol)
    s = (B * F - C * E) / denom
    u = (A * F - B * C) / denom
    slack_a, slack_b = tol / math.sqrt(A), tol / math.sqrt(E)
    if not (-slack_a <= s <= 1.0 + slack_a and -slack_b <= u <= 1.0 + slack_b):
        return [], False
    hit = _accept(a, b, min(1.0, max(0.0, s)), min(1.0, max(0.0, u)), tol)
    return ([hit] if hit else []), False


def _coplanar_frame(arc: Arc, others: List[np.ndarray], tol: float) -> Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    center, ax, ay = _arc_frame(arc)
    if arc.dim == 2:
        return center, ax, ay
    normal = np.cross(ax, ay)
    for p in others:
        if not _within(abs(float((p - center) @ normal)), tol):
            return None
    return center, ax, ay


def _line_circle_params(p0: np.ndarray, p1: np.ndarray, radius: float, tol: float) -> List[float]:
    """Line parameters where segment p0p1 meets the circle of `radius` about the origin (2D)."""
    d = p1 - p0
    A = d @ d
    s_foot = -(p0 @ d) / A
    h = float(np.linalg.norm(p0 + s_foot * d))
    if abs(h - radius) <= tol:
        return [s_foot]
    if h > radius:
        return []
    half = math.sqrt(radius * radius - h * h) / math.sqrt(A)
    return [s_foot - half, s_foot + half]


def _line_arc(line: Line, arc: Arc, tol: float) -> Optional[List[ParamPair]]:
    p0, p1 = vec(line.p0), vec(line.p1)
    frame = _coplanar_frame(arc, [p0, p1], tol)
    if frame is None:
        return None
    center, ax, ay = frame
    q0 = np.array([(p0 - center) @ ax, (p0 - center) @ ay])
    q1 = np.array([(p1 - center) @ ax, (p1 - center) @ ay])
    slack = tol / float(np.linalg.norm(p1 - p0))
    pairs = []
    for s in _line_circle_params(q0, q1, arc.radius, tol):
        if -slack <= s <= 1.0 + slack:
            s = min(1.0, max(0.0, s))
            tb = locate_param(arc, line.point_at(s), tol)
            if tb is not None:
                hit = _accept(line, arc, s, tb, tol)
                if hit:
                    pairs.append(hit)
    return pairs


def _circle_circle_points(c2: np.ndarray, r1: float, r2: float, tol: float) -> Optional[List[np.ndarray]]:
    """Meeting points of the circle r1 about the origin and the circle r2 about c2 (2D); None when coincident."""
    d = float(np.linalg.norm(c2))
    if d <= tol and abs(r1 - r2) <= tol:
        return None
    if d == 0.0 or d > r1 + r2 + tol or d < abs(r1 - r2) - tol:
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    base = a * c2 / d
    if h2 <= tol * tol:
        return [base]
    h = math.sqrt(h2)
    perp = np.array([-c2[1], c2[0]]) / d
    return [base + h * perp, base - h * perp]


def _arc_arc(a: Arc, b: Arc, tol: float) -> Optional[Tuple[List[ParamPair], bool]]:
    center_b, bx, by = _arc_frame(b)
    frame = _coplanar_frame(a, [center_b, center_b + b.radius * bx, center_b + b.radius * by], tol)
    if frame is None:
        return None
    center, ax, ay = frame
    rel = center_b - center
    points = _circle_circle_points(np.array([rel @ ax, rel @ ay]), a.radius, b.radius, tol)
    if points is None:
        return _overlap_result(a, b, tol)
    pairs = []
    for q in points:
        world = center + q[0] * ax + q[1] * ay
        ta, tb = locate_param(a, world, tol), locate_param(b, world, tol)
        if ta is not None and tb is not None:
            hit = _accept(a, b, ta, tb, tol)
            if hit:
                pairs.append(hit)
    return pairs, False


def _refine(a: CurveSpec, b: CurveSpec, ta: float, tb: float) -> ParamPair:
    """Gauss-Newton on |a(ta) - b(tb)|^2 with parameters clamped to [0, 1]."""
    for _ in range(NEWTON_ITERATIONS):
        residual = a.point_at(ta) - b.point_at(tb)
        jac = np.stack([a.derivative_at(ta), -b.derivative_at(tb)], axis=1)
        step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        na = min(1.0, max(0.0, ta + float(step[0])))
        nb = min(1.0, max(0.0, tb + float(step[1])))
        if abs(na - ta) <= 1e-15 and abs(nb - tb) <= 1e-15:
            ta, tb = na, nb
            break
        ta, tb = na, nb
    return ta, tb


def _subdivide(a: CurveSpec, b: CurveSpec, tol: float) -> Tuple[List[ParamPair], bool]:
    hits: List[ParamPair] = []
    stack = [(0.0, 1.0, 0.0, 1.0, 0)]
    while stack:
        a0, a1, b0, b1, depth = stack.pop()
        box_a, box_b = a.bbox(a0, a1), b.bbox(b0, b1)
        if not box_a.overlaps(box_b, tol):
            continue
        size = max(box_a.diagonal, box_b.diagonal)
        if size < NEWTON_BOX_DIAGONAL or depth >= MAX_SUBDIVISION_DEPTH:
            ta, tb = _refine(a, b, 0.5 * (a0 + a1), 0.5 * (b0 + b1))
            inside = a0 - 1e-9 <= ta <= a1 + 1e-9 and b0 - 1e-9 <= tb <= b1 + 1e-9
            hit = _accept(a, b, ta, tb, tol)
            if hit and (inside or size < tol / 4 or depth >= MAX_SUBDIVISION_DEPTH):
                hits.append(hit)
                continue
            if size < tol / 4 or depth >= MAX_SUBDIVISION_DEPTH:
                continue
        if len(stack) + len(hits) > MAX_PENDING_PAIRS:
            return _overlap_result(a, b, tol)[0], True
        am, bm = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
        stack.extend([
            (am, a1, bm, b1, depth + 1),
            (am, a1, b0, bm, depth + 1),
            (a0, am, bm, b1, depth + 1),
            (a0, am, b0, bm, depth + 1),
        ])
    return hits, False


def intersect_curves(a: CurveSpec, b: CurveSpec, tol: float = DEFAULT_TOL) -> List[ParamPair]:
    """All (ta, tb) with |a(ta) - b(tb)| <= tol, sorted by ta.

    Overlapping curves log a warning and yield only the pairs at their endpoints.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not a.bbox().overlaps(b.bbox(), tol):
        return []

    result = None
    if isinstance(a, Line) and isinstance(b, Line):
        result = _line_line(a, b, tol)
    elif isinstance(a, Line) and isinstance(b, Arc):
        pairs = _line_arc(a, b, tol)
        result = None if pairs is None else (pairs, False)
    elif isinstance(a, Arc) and isinstance(b, Line):
        pairs = _line_arc(b, a, tol)
        result = None if pairs is None else ([(ta, tb) for tb, ta in pairs], False)
    elif isinstance(a, Arc) and isinstance(b, Arc):
        result = _arc_arc(a, b, tol)
    if result is None:
        result = _subdivide(a, b, tol)

    pairs, overlap = result
    if overlap:
        logger.warning(f"Overlapping curves {a.kind.value} and {b.kind.value}: keeping endpoint intersections only")
    return _merge_pairs(a, b, pairs, tol)
