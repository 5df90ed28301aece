# ABOUTME: build_hypergraph composes normalization, node selection, curve splitting and surface attachment
# ABOUTME: Also renders the stable N/E/S text dump used by the inspector

import logging
from typing import Optional

from rendnet.hypergraph.edges import split_curves
from rendnet.hypergraph.nodes import select_nodes
from rendnet.hypergraph.state import Hypergraph
from rendnet.hypergraph.surfaces import attach_surfaces
from rendnet.models.config import HypergraphConfig
from rendnet.vgdoc import VGDocument, boundary_curves, normalize_document
from rendnet.vgdoc.normalize import NormalizationTransform

logger = logging.getLogger(__name__)


def outlined(doc: VGDocument) -> VGDocument:
    """Same document with every surface boundary added as explicit curves."""
    curves = [curve for surface in doc.surfaces for curve in boundary_curves(surface)]
    logger.info(f"Document has no curves; outlining {len(doc.surfaces)} surface(s) with {len(curves)} boundary curves")
    return VGDocument(doc.dim, curves, doc.surfaces, doc.label)


def build_hypergraph(doc: VGDocument, config: Optional[HypergraphConfig] = None) -> Hypergraph:
    """Convert a document into its hypergraph; deterministic for a given document and config.

    A document with surfaces but no curves is first outlined with its surfaces' boundary curves.
    """
    config = config or HypergraphConfig()
    if not doc.curves:
        doc = outlined(doc)
    if config.normalize:
        doc, transform = normalize_document(doc)
    else:
        transform = NormalizationTransform.identity(doc.dim)

    nodes = select_nodes(doc, config.tol)
    edges = split_curves(doc, nodes)
    surfaces = attach_surfaces(doc, nodes, config.tol)
    graph = Hypergraph(doc.dim, nodes, edges, surfaces, doc, transform)
    logger.debug(f"Hypergraph: {len(nodes)} nodes, {len(edges)} edges, {len(surfaces)} hyperedges")
    return graph


def _coords(values) -> str:
    return " ".join(f"{float(v):.17g}" for v in values)


def dump_hypergraph(graph: Hypergraph) -> str:
    """Text dump: `N id x y [z]`, `E id n0 n1 type`, `S id type n0..nk`, each ordered by id."""
    lines = [f"N {node.id} {_coords(node.position)}" for node in graph.nodes]
    lines += [f"E {e.id} {e.endpoints[0]} {e.endpoints[1]} {e.kind.value}" for e in graph.edges]
    lines += [
        f"S {s.id} {s.kind.value} " + " ".join(str(m) for m in s.members)
        for s in graph.surfaces
    ]
    return "\n".join(lines) + "\n"
