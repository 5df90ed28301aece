"""
RendNet: vector-graphics recognition with a two-stream network over a curve/surface
hypergraph and its latent-space rasterization.
"""

__version__ = "0.1.0"
