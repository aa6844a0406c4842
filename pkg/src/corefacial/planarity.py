"""Planarity testing with embedding extraction.

Backed by networkx's left-right planarity test; the contract here is the
returned rotation system, which is validated against Euler's formula before
it leaves this module. Output is deterministic for a fixed input graph
because the networkx graph is built in sorted vertex/edge order.
"""

from __future__ import annotations

import networkx as nx

from .graph import CombinatorialEmbedding, Graph, GraphError, is_connected


class DisconnectedGraphError(GraphError):
    """Planarity embedding requested for a disconnected graph."""


def planar_embedding(g: Graph) -> CombinatorialEmbedding | None:
    """Planar rotation system of a simple connected graph, or None.

    The embedding satisfies V - E + F = 2; non-planar input yields None.
    """
    if g.skeleton:
        raise GraphError("planar_embedding expects a simple (non-skeleton) graph")
    if not is_connected(g):
        raise DisconnectedGraphError("planar_embedding requires a connected graph")
    if g.num_vertices() <= 2 or g.num_edges() == 0:
        rot = {v: tuple(g.incident_edges(v)) for v in g.vertices}
        return CombinatorialEmbedding(g, rot)

    nxg = nx.Graph()
    nxg.add_nodes_from(g.sorted_vertices())
    eid_of = {}
    for eid in g.edge_ids():
        u, v = g.endpoints(eid)
        nxg.add_edge(u, v)
        eid_of[frozenset((u, v))] = eid
    ok, nx_emb = nx.check_planarity(nxg)
    if not ok:
        return None
    data = nx_emb.get_data()
    rotation = {
        v: tuple(eid_of[frozenset((v, w))] for w in data[v]) for v in g.vertices
    }
    emb = CombinatorialEmbedding(g, rotation)
    if not emb.euler_genus_zero():
        raise AssertionError("planarity backend produced a non-planar rotation")
    return emb


def is_planar(g: Graph) -> bool:
    if not is_connected(g):
        raise DisconnectedGraphError("is_planar requires a connected graph")
    return planar_embedding(g) is not None
