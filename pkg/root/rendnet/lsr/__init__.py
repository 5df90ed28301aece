"""
Latent space rasterization: fragments sampled from curves and surfaces,
parameter-space triangulation, barycentric interpolation of node attributes,
and kNN neighborhoods for the raster stream.
"""

from .interpolation import InterpolationMap
from .fragments import Fragment, FragmentBlock, chord_fragments, fragment_count, sample_curve_fragments
from .delaunay import clip_triangles, delaunay_2d, incircle, orientation
from .sampling import SampleEliminator, sample_surface_fragments, target_count, triangle_areas
from .grid import SpatialGrid, knn_neighborhoods
from .plan import RasterPlan, SimplexTable, build_raster_plan, interpolate_backward, interpolate_forward

__all__ = [
    "Fragment",
    "FragmentBlock",
    "InterpolationMap",
    "RasterPlan",
    "SampleEliminator",
    "SimplexTable",
    "SpatialGrid",
    "build_raster_plan",
    "chord_fragments",
    "clip_triangles",
    "delaunay_2d",
    "fragment_count",
    "incircle",
    "interpolate_backward",
    "interpolate_forward",
    "knn_neighborhoods",
    "orientation",
    "sample_curve_fragments",
    "sample_surface_fragments",
    "target_count",
    "triangle_areas",
]
