# ABOUTME: Node selection: curve endpoints, pairwise intersections, then farthest-point fill-in
# ABOUTME: Candidates within the merge tolerance collapse into one node carrying all their anchors

import logging
from typing import Dict, List, Tuple

import numpy as np

from rendnet.hypergraph.intersect import DEFAULT_TOL, intersect_curves
from rendnet.hypergraph.state import Anchor, HNode
from rendnet.vgdoc import ArcLengthTable, Line, VGDocument, arc_length

logger = logging.getLogger(__name__)

MIN_CURVE_NODES = 4
MAX_FILL_ROUNDS = 64
ANCHOR_DEDUP = 1e-9


def _find(parent: List[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _cluster(points: np.ndarray, tol: float) -> List[int]:
    """Union-find labels: candidates within tol share a root (the lowest index)."""
    n = len(points)
    parent = list(range(n))
    if n == 0:
        return parent
    diff = points[:, None, :] - points[None, :, :]
    close = np.linalg.norm(diff, axis=-1) <= tol
    for i, j in zip(*np.nonzero(np.triu(close, k=1))):
        ri, rj = _find(parent, int(i)), _find(parent, int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return [_find(parent, i) for i in range(n)]


def _dedup_anchors(anchors: List[Anchor]) -> Tuple[Anchor, ...]:
    kept: List[Anchor] = []
    for curve_id, t in sorted(anchors):
        if kept and kept[-1][0] == curve_id and abs(kept[-1][1] - t) <= ANCHOR_DEDUP:
            continue
        kept.append((curve_id, t))
    return tuple(kept)


def _initial_nodes(doc: VGDocument, tol: float) -> List[HNode]:
    positions: List[np.ndarray] = []
    anchors: List[List[Anchor]] = []
    for i, curve in enumerate(doc.curves):
        for t in (0.0, 1.0):
            positions.append(curve.point_at(t))
            anchors.append([(i, t)])

    for i in range(len(doc.curves)):
        for j in range(i + 1, len(doc.curves)):
            for ta, tb in intersect_curves(doc.curves[i], doc.curves[j], tol):
                positions.append(doc.curves[i].point_at(ta))
                anchors.append([(i, ta), (j, tb)])

    if not positions:
        return []
    labels = _cluster(np.stack(positions), tol)
    roots = sorted(set(labels))
    node_of_root = {root: k for k, root in enumerate(roots)}
    merged: Dict[int, List[Anchor]] = {k: [] for k in range(len(roots))}
    for idx, root in enumerate(labels):
        merged[node_of_root[root]].extend(anchors[idx])
    return [
        HNode(id=k, position=np.array(positions[root], dtype=float), anchors=_dedup_anchors(merged[k]))
        for k, root in enumerate(roots)
    ]


def _nodes_on_curve(nodes: List[HNode], curve_id: int) -> List[Tuple[float, int]]:
    return sorted((t, node.id) for node in nodes for c, t in node.anchors if c == curve_id)


def _fill_curve(doc: VGDocument, nodes: List[HNode], curve_id: int, tol: float) -> None:
    curve = doc.curves[curve_id]
    table = ArcLengthTable(curve)
    for _ in range(MAX_FILL_ROUNDS):
        on_curve = _nodes_on_curve(nodes, curve_id)
        if len({node_id for _, node_id in on_curve}) >= MIN_CURVE_NODES:
            return
        params = np.array(sorted({t for t, _ in on_curve}))
        lengths = np.array([arc_length(curve, 0.0, t) for t in params])
        gaps = np.diff(lengths)
        k = int(np.argmax(gaps))
        t_new = table.invert(0.5 * (lengths[k] + lengths[k + 1]))
        point = curve.point_at(t_new)
        positions = np.stack([node.position for node in nodes])
        distances = np.linalg.norm(positions - point, axis=1)
        nearest = int(np.argmin(distances))
        if distances[nearest] <= tol:
            node = nodes[nearest]
            node.anchors = _dedup_anchors(list(node.anchors) + [(curve_id, t_new)])
        else:
            nodes.append(HNode(id=len(nodes), position=point, anchors=((curve_id, t_new),)))
    logger.warning(f"Curve {curve_id} still carries fewer than {MIN_CURVE_NODES} nodes after fill-in")


def select_nodes(doc: VGDocument, tol: float = DEFAULT_TOL) -> List[HNode]:
    """Endpoints and intersections merged within tol, plus farthest-point samples on non-line curves."""
    nodes = _initial_nodes(doc, tol)
    if not nodes:
        return nodes
    for curve_id, curve in enumerate(doc.curves):
        if not isinstance(curve, Line):
            _fill_curve(doc, nodes, curve_id, tol)
    logger.debug(f"Selected {len(nodes)} nodes over {len(doc.curves)} curves")
    return nodes
