# ABOUTME: Data types for the document hypergraph: nodes, curve-segment edges and surface hyperedges
# ABOUTME: Hypergraph builds its adjacency and incidence indices on construction

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from rendnet.vgdoc import CURVE_KINDS, SURFACE_KINDS, CurveKind, SurfaceKind, VGDocument
from rendnet.vgdoc.normalize import NormalizationTransform

Anchor = Tuple[int, float]  # (curve id, parameter t)


def curve_onehot(kind: CurveKind) -> np.ndarray:
    onehot = np.zeros(len(CURVE_KINDS))
    onehot[CURVE_KINDS.index(kind)] = 1.0
    return onehot


def surface_onehot(kind: SurfaceKind) -> np.ndarray:
    onehot = np.zeros(len(SURFACE_KINDS))
    onehot[SURFACE_KINDS.index(kind)] = 1.0
    return onehot


@dataclass
class HNode:
    id: int
    position: np.ndarray
    anchors: Tuple[Anchor, ...] = ()


@dataclass
class HEdge:
    """Curve segment between two nodes, stored in canonical orientation t0 < t1."""
    id: int
    endpoints: Tuple[int, int]
    curve_id: int
    t_range: Tuple[float, float]
    kind: CurveKind
    start_dir: np.ndarray
    end_dir: np.ndarray

    @property
    def type_onehot(self) -> np.ndarray:
        return curve_onehot(self.kind)

    @property
    def features(self) -> np.ndarray:
        """[start dir, end dir, curve-type one-hot]."""
        return np.concatenate([self.start_dir, self.end_dir, self.type_onehot])

    @property
    def reversed_features(self) -> np.ndarray:
        """Features of the same segment traversed from endpoints[1] to endpoints[0]."""
        return np.concatenate([-self.end_dir, -self.start_dir, self.type_onehot])


@dataclass
class HSurface:
    """Surface hyperedge; param_coords[k] belongs to members[k]."""
    id: int
    surface_id: int
    kind: SurfaceKind
    members: Tuple[int, ...]
    param_coords: np.ndarray

    @property
    def type_onehot(self) -> np.ndarray:
        return surface_onehot(self.kind)


@dataclass
class Hypergraph:
    dim: int
    nodes: List[HNode]
    edges: List[HEdge]
    surfaces: List[HSurface]
    document: VGDocument
    transform: NormalizationTransform
    adjacency: List[List[Tuple[int, int]]] = field(init=False, repr=False)
    incidence: List[List[int]] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.nodes)
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise ValueError(f"node ids must be dense, found {node.id} at position {i}")
        self.adjacency = [[] for _ in range(n)]
        for edge in self.edges:
            a, b = edge.endpoints
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge {edge.id} references a missing node")
            self.adjacency[a].append((b, edge.id))
            self.adjacency[b].append((a, edge.id))
        self.incidence = [[] for _ in range(n)]
        for surface in self.surfaces:
            for member in surface.members:
                if not 0 <= member < n:
                    raise ValueError(f"hyperedge {surface.id} references a missing node")
                self.incidence[member].append(surface.id)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def positions(self) -> np.ndarray:
        if not self.nodes:
            return np.zeros((0, self.dim))
        return np.stack([node.position for node in self.nodes])

    def neighbors(self, i: int) -> List[int]:
        return [j for j, _ in self.adjacency[i]]

    def relabeled(self, perm: Sequence[int]) -> "Hypergraph":
        """Same hypergraph with node `i` renamed to `perm[i]`; edge and hyperedge order kept."""
        perm = np.asarray(perm, dtype=int)
        if sorted(perm.tolist()) != list(range(self.num_nodes)):
            raise ValueError("perm must be a permutation of the node ids")
        nodes = [None] * self.num_nodes
        for node in self.nodes:
            new_id = int(perm[node.id])
            nodes[new_id] = HNode(new_id, node.position.copy(), node.anchors)
        edges = [
            HEdge(e.id, (int(perm[e.endpoints[0]]), int(perm[e.endpoints[1]])), e.curve_id, e.t_range,
                  e.kind, e.start_dir.copy(), e.end_dir.copy())
            for e in self.edges
        ]
        surfaces = []
        for s in self.surfaces:
            mapped = np.array([perm[m] for m in s.members], dtype=int)
            order = np.argsort(mapped, kind="stable")
            surfaces.append(HSurface(s.id, s.surface_id, s.kind, tuple(int(m) for m in mapped[order]),
                                     s.param_coords[order].copy()))
        return Hypergraph(self.dim, nodes, edges, surfaces, self.document, self.transform)
