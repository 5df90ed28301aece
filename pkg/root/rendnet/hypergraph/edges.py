# ABOUTME: Splits every curve at its node anchors into edges with tangent and curve-type features

import logging
from typing import List

from rendnet.hypergraph.state import HEdge, HNode
from rendnet.vgdoc import VGDocument, curve_tangent

logger = logging.getLogger(__name__)

MIN_SEGMENT_PARAM = 1e-12


def split_curves(doc: VGDocument, nodes: List[HNode]) -> List[HEdge]:
    """One edge per consecutive anchor pair along each curve, ordered by curve then t."""
    anchors_by_curve = [[] for _ in doc.curves]
    for node in nodes:
        for curve_id, t in node.anchors:
            anchors_by_curve[curve_id].append((t, node.id))

    edges: List[HEdge] = []
    for curve_id, curve in enumerate(doc.curves):
        anchors = sorted(anchors_by_curve[curve_id])
        if len(anchors) < 2:
            raise RuntimeError(f"curve {curve_id} has {len(anchors)} anchors; node selection must give it two or more")
        for (t0, n0), (t1, n1) in zip(anchors[:-1], anchors[1:]):
            if t1 - t0 <= MIN_SEGMENT_PARAM:
                continue
            if n0 == n1:
                logger.debug(f"Skipping self-loop segment [{t0}, {t1}] of curve {curve_id} at node {n0}")
                continue
            edges.append(HEdge(
                id=len(edges),
                endpoints=(n0, n1),
                curve_id=curve_id,
                t_range=(t0, t1),
                kind=curve.kind,
                start_dir=curve_tangent(curve, t0),
                end_dir=curve_tangent(curve, t1),
            ))
    return edges
