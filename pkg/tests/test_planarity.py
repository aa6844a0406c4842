from __future__ import annotations

import itertools
import random

import pytest

from corefacial.graph import Graph, all_rotation_systems, compute_faces, is_connected
from corefacial.planarity import DisconnectedGraphError, planar_embedding


def complete(n: int) -> Graph:
    return Graph(range(n), list(itertools.combinations(range(n), 2)))


def test_k4_embedding_has_four_faces():
    emb = planar_embedding(complete(4))
    assert emb is not None
    assert len(compute_faces(emb)) == 4


def test_k5_is_not_planar():
    assert planar_embedding(complete(5)) is None


def test_k33_is_not_planar():
    g = Graph(range(6), [(a, b) for a in range(3) for b in range(3, 6)])
    assert planar_embedding(g) is None


def test_disconnected_rejected():
    g = Graph(range(4), [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        planar_embedding(g)


def test_deterministic_embedding():
    g = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (0, 3)])
    a = planar_embedding(g)
    b = planar_embedding(g)
    assert a.rotation == b.rotation


def test_edge_count_bound_respected():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(3, 9)
        maxe = n * (n - 1) // 2
        m = rng.randint(n - 1, maxe)
        edges = rng.sample(list(itertools.combinations(range(n), 2)), m)
        g = Graph(range(n), edges)
        if not is_connected(g):
            continue
        if planar_embedding(g) is not None:
            assert m <= max(3 * n - 6, 1)


def all_small_connected_graphs(max_n: int):
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    for nxg in graph_atlas_g():
        n = nxg.number_of_nodes()
        if n < 1 or n > max_n:
            continue
        if n > 1 and not nx.is_connected(nxg):
            continue
        yield Graph(range(n), [tuple(e) for e in nxg.edges()])


def test_agrees_with_exhaustive_rotation_search_up_to_5():
    # planar_embedding succeeds exactly when some rotation passes Euler
    for g in all_small_connected_graphs(5):
        if g.num_vertices() < 3:
            continue
        brute = any(emb.euler_genus_zero() for emb in all_rotation_systems(g))
        assert (planar_embedding(g) is not None) == brute
