"""Constrained planarity testing with facial pair constraints.

The central question answered by this package: given a biconnected graph
whose edges are split into core and non-core sets, plus a collection of
vertex pairs, is there a planar embedding of the whole graph in which every
pair shares a face of the drawing restricted to the core? A weighted
crossing model (primary/secondary/tertiary edges) reduces to the same
question, as do partial planarity and embedding extension for a biconnected
fixed part.

Modules:
    graph       multigraphs, rotation systems, faces, restrictions
    planarity   planar embedding of simple graphs
    spqr        decomposition into triconnected components
    fccp        the core-facial solver (bags and pockets over the tree)
    reductions  crossing model and problem reductions
    oracle      brute-force deciders for small instances
    cli         command-line front end
"""

from .graph import (
    CombinatorialEmbedding,
    Face,
    Graph,
    GraphError,
    compute_faces,
    hface_of_vertex,
    is_biconnected,
    is_connected,
    restrict_embedding,
)
from .planarity import planar_embedding

__all__ = [
    "CombinatorialEmbedding",
    "Face",
    "Graph",
    "GraphError",
    "compute_faces",
    "hface_of_vertex",
    "is_biconnected",
    "is_connected",
    "planar_embedding",
    "restrict_embedding",
]
