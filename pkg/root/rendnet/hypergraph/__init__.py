"""
Hypergraph construction: nodes from endpoints and intersections, curve-segment
edges, and surface hyperedges.
"""

from .state import HEdge, HNode, HSurface, Hypergraph, curve_onehot, surface_onehot
from .intersect import intersect_curves, locate_param
from .nodes import select_nodes
from .edges import split_curves
from .surfaces import SurfaceChart, attach_surfaces
from .graph import build_hypergraph, dump_hypergraph

__all__ = [
    "HEdge",
    "HNode",
    "HSurface",
    "Hypergraph",
    "SurfaceChart",
    "attach_surfaces",
    "build_hypergraph",
    "curve_onehot",
    "dump_hypergraph",
    "intersect_curves",
    "locate_param",
    "select_nodes",
    "split_curves",
    "surface_onehot",
]
