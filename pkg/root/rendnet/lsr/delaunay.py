# ABOUTME: Bowyer-Watson Delaunay triangulation of 2D parameter points
# ABOUTME: Plus centroid clipping of triangles against a surface's region

import logging
from typing import List, Tuple

import numpy as np

from rendnet.exceptions import DegenerateTriangulationError

logger = logging.getLogger(__name__)

SUPER_SCALE = 1e5
INCIRCLE_REL_TOL = 1e-12
COLLINEAR_REL_TOL = 1e-12

Triangle = Tuple[int, int, int]


def orientation(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Twice the signed area of (a, b, c); positive when counter-clockwise."""
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def incircle(a: np.ndarray, b: np.ndarray, c: np.ndarray, p: np.ndarray) -> Tuple[float, float]:
    """In-circle determinant of p against ccw (a, b, c) and its magnitude bound.

    The determinant is positive when p is strictly inside the circumcircle.
    """
    adx, ady = a[0] - p[0], a[1] - p[1]
    bdx, bdy = b[0] - p[0], b[1] - p[1]
    cdx, cdy = c[0] - p[0], c[1] - p[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdx * cdy - cdx * bdy)
           + blift * (cdx * ady - adx * cdy)
           + clift * (adx * bdy - bdx * ady))
    permanent = (alift * (abs(bdx * cdy) + abs(cdx * bdy))
                 + blift * (abs(cdx * ady) + abs(adx * cdy))
                 + clift * (abs(adx * bdy) + abs(bdx * ady)))
    return float(det), float(permanent)


def _strictly_inside(pts: np.ndarray, tri: Triangle, p: np.ndarray) -> bool:
    det, permanent = incircle(pts[tri[0]], pts[tri[1]], pts[tri[2]], p)
    return det > INCIRCLE_REL_TOL * permanent


def _ccw(pts: np.ndarray, a: int, b: int, c: int) -> Triangle:
    return (a, b, c) if orientation(pts[a], pts[b], pts[c]) > 0 else (a, c, b)


def _check_input(points: np.ndarray) -> List[int]:
    """Indices of the first occurrence of each distinct point; raises on degenerate input."""
    if points.ndim != 2 or points.shape[1] != 2:
        raise DegenerateTriangulationError(f"expected (n, 2) points, got shape {points.shape}")
    if len(points) < 3:
        raise DegenerateTriangulationError(f"need at least 3 points, got {len(points)}")
    seen = {}
    for i, p in enumerate(points):
        seen.setdefault((float(p[0]), float(p[1])), i)
    unique = sorted(seen.values())
    if len(unique) < 3:
        raise DegenerateTriangulationError(f"need at least 3 distinct points, got {len(unique)}")

    base = points[unique[0]]
    offsets = points[unique] - base
    far = int(np.argmax(np.einsum("ij,ij->i", offsets, offsets)))
    axis = offsets[far]
    cross = np.abs(axis[0] * offsets[:, 1] - axis[1] * offsets[:, 0])
    if cross.max() <= COLLINEAR_REL_TOL * float(axis @ axis):
        raise DegenerateTriangulationError("all points are collinear")
    return unique


def _super_vertices() -> np.ndarray:
    """Vertices of a triangle enclosing the unit square with a wide margin."""
    m = SUPER_SCALE
    return np.array([[0.5 - 2.0 * m, 0.5 - m], [0.5 + 2.0 * m, 0.5 - m], [0.5, 0.5 + 2.0 * m]])


def _insert(pts: np.ndarray, triangles: List[Triangle], index: int) -> List[Triangle]:
    p = pts[index]
    bad = [tri for tri in triangles if _strictly_inside(pts, tri, p)]
    edge_count = {}
    for tri in bad:
        for edge in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = tuple(sorted(edge))
            edge_count[key] = edge_count.get(key, 0) + 1
    boundary = []
    for tri in bad:
        for edge in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            if edge_count[tuple(sorted(edge))] == 1:
                boundary.append(edge)
    bad_set = set(bad)
    kept = [tri for tri in triangles if tri not in bad_set]
    kept.extend((a, b, index) for a, b in boundary)
    return kept


def _opposite(tri: Triangle, a: int, b: int) -> int:
    return next(v for v in tri if v != a and v != b)


def _break_cocircular_ties(pts: np.ndarray, triangles: List[Triangle]) -> List[Triangle]:
    """Flip diagonals of cocircular quads toward the lowest point index."""
    limit = 10 * len(triangles) + 10
    for _ in range(limit):
        owners = {}
        for t_idx, tri in enumerate(triangles):
            for edge in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                owners.setdefault(tuple(sorted(edge)), []).append(t_idx)
        flipped = False
        for (a, b), shared in sorted(owners.items()):
            if len(shared) != 2:
                continue
            t1, t2 = triangles[shared[0]], triangles[shared[1]]
            c, d = _opposite(t1, a, b), _opposite(t2, a, b)
            if min(c, d) >= min(a, b):
                continue
            det, permanent = incircle(*(pts[v] for v in t1), pts[d])
            if abs(det) > INCIRCLE_REL_TOL * permanent:
                continue
            # a and b must lie strictly on opposite sides of the new diagonal
            if orientation(pts[c], pts[d], pts[a]) * orientation(pts[c], pts[d], pts[b]) >= 0:
                continue
            triangles[shared[0]] = _ccw(pts, c, d, a)
            triangles[shared[1]] = _ccw(pts, c, d, b)
            flipped = True
            break
        if not flipped:
            return triangles
    logger.warning("Cocircular tie breaking did not settle; keeping current diagonals")
    return triangles


def _canonical(tri: Triangle) -> Triangle:
    k = tri.index(min(tri))
    return tri[k:] + tri[:k]


def delaunay_2d(points) -> np.ndarray:
    """Delaunay triangulation of the convex hull of `points`.

    Returns a (T, 3) array of counter-clockwise index triples, each rotated to
    start at its lowest index and sorted lexicographically. Exact duplicate
    points are triangulated once, through their first occurrence.
    """
    points = np.asarray(points, dtype=float)
    unique = _check_input(points)

    low = points[unique].min(axis=0)
    extent = float(np.max(points[unique].max(axis=0) - low))
    unit = (points - low) / extent

    n = len(points)
    pts = np.concatenate([unit, _super_vertices()], axis=0)
    triangles: List[Triangle] = [_ccw(pts, n, n + 1, n + 2)]
    for index in unique:
        triangles = _insert(pts, triangles, index)

    triangles = [tri for tri in triangles if max(tri) < n]
    triangles = _break_cocircular_ties(pts, triangles)
    result = sorted(_canonical(_ccw(pts, *tri)) for tri in triangles)
    return np.array(result, dtype=int).reshape(-1, 3)


def clip_triangles(chart, params: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Drop triangles whose parameter-space centroid lies outside the surface region.

    `params` holds the member nodes' chart coordinates; `triangles` indexes into it.
    """
    triangles = np.asarray(triangles, dtype=int).reshape(-1, 3)
    if len(triangles) == 0:
        return triangles
    centroids = np.asarray(params, dtype=float)[triangles].mean(axis=1)
    keep = chart.contains_param(centroids)
    clipped = triangles[keep]
    if len(clipped) == 0:
        logger.warning(f"All {len(triangles)} triangles fall outside the surface region; no surface fragments")
    elif len(clipped) < len(triangles):
        logger.debug(f"Clipped {len(triangles) - len(clipped)} of {len(triangles)} triangles")
    return clipped
