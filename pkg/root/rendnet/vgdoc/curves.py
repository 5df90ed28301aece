# ABOUTME: Curve evaluation, unit tangents, arc length and its inverse
# ABOUTME: Closed forms for lines and arcs, adaptive Gauss-Legendre quadrature for quadratic Beziers

import logging
from typing import Tuple

import numpy as np

from rendnet.exceptions import DomainError
from rendnet.vgdoc.document import Arc, CurveSpec, Line, QuadBezier, vec

logger = logging.getLogger(__name__)

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
PANEL_REL_TOL = 1e-8
MAX_QUAD_DEPTH = 40
TABLE_PANELS = 64
INVERSE_ITERATIONS = 80


def _check_unit_interval(t, name: str = "t") -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {t}")
    return arr


def eval_curve(curve: CurveSpec, t) -> np.ndarray:
    """Point(s) on `curve` at parameter(s) t in [0, 1]."""
    return curve.point_at(_check_unit_interval(t))


def _control_scale(curve: CurveSpec) -> float:
    if isinstance(curve, Arc):
        return curve.radius
    return curve.bbox().diagonal


def _fallback_direction(curve: CurveSpec) -> np.ndarray:
    if isinstance(curve, QuadBezier):
        chord = vec(curve.p2) - vec(curve.p0)
        if np.linalg.norm(chord) > 0.0:
            return chord
        return vec(curve.p1) - vec(curve.p0)
    return curve.derivative_at(0.5)


def curve_tangent(curve: CurveSpec, t) -> np.ndarray:
    """Unit tangent in traversal direction; chord direction where the derivative vanishes."""
    arr = _check_unit_interval(t)
    d = np.atleast_2d(curve.derivative_at(arr))
    norms = np.linalg.norm(d, axis=1)
    flat = norms <= 1e-14 * max(_control_scale(curve), 1e-300)
    if np.any(flat):
        fallback = _fallback_direction(curve)
        d[flat] = fallback
        norms[flat] = np.linalg.norm(fallback)
    unit = d / norms[:, None]
    return unit.reshape(np.shape(arr) + (curve.dim,))


def _speed(curve: CurveSpec, t: np.ndarray) -> np.ndarray:
    return np.linalg.norm(curve.derivative_at(t), axis=-1)


def _gauss_panel(curve: CurveSpec, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(GL_WEIGHTS, _speed(curve, mid + half * GL_NODES)))


def _adaptive_length(curve: CurveSpec, a: float, b: float, whole: float, depth: int) -> float:
    m = 0.5 * (a + b)
    left = _gauss_panel(curve, a, m)
    right = _gauss_panel(curve, m, b)
    refined = left + right
    if depth >= MAX_QUAD_DEPTH or abs(refined - whole) <= PANEL_REL_TOL * abs(refined):
        return refined
    return _adaptive_length(curve, a, m, left, depth + 1) + _adaptive_length(curve, m, b, right, depth + 1)


def _bezier_length(curve: QuadBezier, t0: float, t1: float) -> float:
    if t1 <= t0:
        return 0.0
    return _adaptive_length(curve, t0, t1, _gauss_panel(curve, t0, t1), 0)


def arc_length(curve: CurveSpec, t0: float = 0.0, t1: float = 1.0) -> float:
    """Length of `curve` restricted to [t0, t1]."""
    t0 = float(_check_unit_interval(t0, "t0"))
    t1 = float(_check_unit_interval(t1, "t1"))
    if t0 > t1:
        raise DomainError(f"t0 must not exceed t1, got [{t0}, {t1}]")
    if isinstance(curve, Line):
        return (t1 - t0) * float(np.linalg.norm(vec(curve.p1) - vec(curve.p0)))
    if isinstance(curve, Arc):
        return (t1 - t0) * curve.radius * abs(curve.sweep)
    return _bezier_length(curve, t0, t1)


class ArcLengthTable:
    """Cumulative arc length over [t0, t1] for repeated inversion on one curve."""

    def __init__(self, curve: CurveSpec, t0: float = 0.0, t1: float = 1.0, panels: int = TABLE_PANELS):
        self.curve = curve
        self.t0, self.t1 = float(t0), float(t1)
        self.uniform = not isinstance(curve, QuadBezier)
        if self.uniform:
            self.knots = np.array([self.t0, self.t1])
            self.cumulative = np.array([0.0, arc_length(curve, self.t0, self.t1)])
        else:
            self.knots = np.linspace(self.t0, self.t1, panels + 1)
            pieces = [_bezier_length(curve, a, b) for a, b in zip(self.knots[:-1], self.knots[1:])]
            self.cumulative = np.concatenate([[0.0], np.cumsum(pieces)])

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])

    def invert(self, s: float) -> float:
        total = self.total
        if s < 0.0 or s > total * (1.0 + 1e-12) + 1e-300:
            raise DomainError(f"arc length {s} outside [0, {total}]")
        s = min(float(s), total)
        if s == 0.0:
            return self.t0
        if s == total:
            return self.t1
        if self.uniform:
            return self.t0 + (self.t1 - self.t0) * (s / total)
        k = int(np.searchsorted(self.cumulative, s, side="right")) - 1
        k = min(max(k, 0), len(self.knots) - 2)
        lo, hi = float(self.knots[k]), float(self.knots[k + 1])
        target = s - float(self.cumulative[k])
        base = float(self.knots[k])
        for _ in range(INVERSE_ITERATIONS):
            mid = 0.5 * (lo + hi)
            if _gauss_panel(self.curve, base, mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-16:
                break
        return 0.5 * (lo + hi)

    def invert_many(self, targets) -> np.ndarray:
        return np.array([self.invert(s) for s in np.asarray(targets, dtype=float)])


def arc_length_inverse(curve: CurveSpec, s: float, start: float = 0.0) -> float:
    """Parameter t with arc_length(curve, start, t) == s."""
    start = float(_check_unit_interval(start, "start"))
    return ArcLengthTable(curve, start, 1.0).invert(s)


def equal_arc_length_params(curve: CurveSpec, t0: float, t1: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """`count` parameters at equal arc-length steps over [t0, t1], endpoints exact.

    Returns the parameters together with their cumulative arc lengths from t0.
    """
    table = ArcLengthTable(curve, t0, t1)
    lengths = np.linspace(0.0, table.total, count)
    params = table.invert_many(lengths[1:-1])
    return np.concatenate([[t0], params, [t1]]), lengths
