# ABOUTME: Surface charts (world point <-> 2D parameter) and hyperedge membership
# ABOUTME: Members are nodes inside the closed surface region; fewer than three members drops the surface

import logging
from typing import List

import numpy as np

from rendnet.hypergraph.intersect import DEFAULT_TOL
from rendnet.hypergraph.state import HNode, HSurface
from rendnet.vgdoc import Disk, Polygon, Rect, SurfaceSpec, VGDocument
from rendnet.vgdoc.document import distance_to_ring, point_in_ring, vec

logger = logging.getLogger(__name__)

MIN_MEMBERS = 3


class SurfaceChart:
    """Maps world points into a surface's 2D parameter space and tests region membership.

    Rect charts use edge-vector coordinates in [0, 1]^2, disks use (x - c) / r in
    the disk plane, and polygons use their bounding box in the polygon's own frame.
    """

    def __init__(self, surface: SurfaceSpec, tol: float = DEFAULT_TOL):
        self.surface = surface
        self.tol = tol
        if isinstance(surface, Rect):
            self._origin = vec(surface.origin)
            self._basis = np.stack([vec(surface.u), vec(surface.v)], axis=1)
        elif isinstance(surface, Disk):
            self._origin = vec(surface.center)
            ax, ay = surface.axes()
            self._basis = np.stack([ax, ay], axis=1) * surface.radius
        elif isinstance(surface, Polygon):
            ring = surface.plane_coords(vec(surface.ring))
            self._ring = ring
            self._low = ring.min(axis=0)
            self._extent = ring.max(axis=0) - self._low
        else:
            raise TypeError(f"unknown surface type {type(surface).__name__}")

    def _raw(self, points: np.ndarray):
        """Unclamped chart coordinates and distance from the surface plane."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if isinstance(self.surface, Polygon):
            uv = self.surface.plane_coords(points)
            offset = np.abs(self.surface.plane_offset(points))
            return uv, offset
        rel = points - self._origin
        coords, *_ = np.linalg.lstsq(self._basis, rel.T, rcond=None)
        coords = coords.T
        offset = np.linalg.norm(rel - coords @ self._basis.T, axis=1)
        return coords, offset

    def to_param(self, points: np.ndarray) -> np.ndarray:
        """Parameter coordinates, clamped into the chart's domain."""
        coords, _ = self._raw(points)
        if isinstance(self.surface, Rect):
            return np.clip(coords, 0.0, 1.0)
        if isinstance(self.surface, Disk):
            norms = np.linalg.norm(coords, axis=1, keepdims=True)
            return np.where(norms > 1.0, coords / np.maximum(norms, 1e-300), coords)
        safe = np.where(self._extent > 0, self._extent, 1.0)
        return np.clip((coords - self._low) / safe, 0.0, 1.0)

    def from_param(self, params: np.ndarray) -> np.ndarray:
        """World points for parameter coordinates."""
        params = np.atleast_2d(np.asarray(params, dtype=float))
        if isinstance(self.surface, Polygon):
            origin, e1, e2 = self.surface.frame()
            uv = self._low + params * self._extent
            return origin + uv[:, :1] * e1 + uv[:, 1:] * e2
        return self._origin + params @ self._basis.T

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Closed-region membership within tol, including the plane distance in 3D."""
        coords, offset = self._raw(points)
        in_plane = offset <= self.tol
        if isinstance(self.surface, Rect):
            slack = self.tol / np.linalg.norm(self._basis, axis=0)
            inside = np.all((coords >= -slack) & (coords <= 1.0 + slack), axis=1)
        elif isinstance(self.surface, Disk):
            inside = np.linalg.norm(coords, axis=1) <= 1.0 + self.tol / self.surface.radius
        else:
            inside = np.array([
                point_in_ring(uv, self._ring) or distance_to_ring(uv[None, :], self._ring) <= self.tol
                for uv in coords
            ], dtype=bool)
        return in_plane & inside

    def contains_param(self, params: np.ndarray) -> np.ndarray:
        """Membership of parameter-space points (used on triangle centroids)."""
        params = np.atleast_2d(np.asarray(params, dtype=float))
        if isinstance(self.surface, Rect):
            return np.all((params >= 0.0) & (params <= 1.0), axis=1)
        if isinstance(self.surface, Disk):
            return np.linalg.norm(params, axis=1) <= 1.0
        uv = self._low + params * self._extent
        return np.array([point_in_ring(p, self._ring) for p in uv], dtype=bool)

    def area(self) -> float:
        return self.surface.area()

    def param_area_scale(self) -> float:
        """World area per unit of parameter area."""
        if isinstance(self.surface, Polygon):
            return float(self._extent[0] * self._extent[1])
        b = self._basis
        gram = b.T @ b
        return float(np.sqrt(max(np.linalg.det(gram), 0.0)))


def attach_surfaces(doc: VGDocument, nodes: List[HNode], tol: float = DEFAULT_TOL) -> List[HSurface]:
    """One hyperedge per surface holding the nodes inside its closed region."""
    if not nodes:
        return []
    positions = np.stack([node.position for node in nodes])
    hyperedges: List[HSurface] = []
    for surface_id, surface in enumerate(doc.surfaces):
        chart = SurfaceChart(surface, tol)
        members = np.nonzero(chart.contains(positions))[0]
        if len(members) < MIN_MEMBERS:
            logger.warning(
                f"Dropping {surface.kind.value} surface {surface_id}: {len(members)} member nodes, "
                f"need {MIN_MEMBERS}"
            )
            continue
        hyperedges.append(HSurface(
            id=len(hyperedges),
            surface_id=surface_id,
            kind=surface.kind,
            members=tuple(int(m) for m in members),
            param_coords=chart.to_param(positions[members]),
        ))
    return hyperedges
