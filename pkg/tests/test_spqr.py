from __future__ import annotations

import itertools
import random

import pytest

from corefacial.graph import Graph, all_rotation_systems, is_biconnected
from corefacial.spqr import (
    NotBiconnectedError,
    build_spqr,
    enumerate_planar_embeddings,
)


def cycle(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def c4_chord() -> Graph:
    # square v0..v3 plus the diagonal v0-v2 (edge id 4)
    return Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def k4() -> Graph:
    return Graph(range(4), list(itertools.combinations(range(4), 2)))


def brute_force_split_pairs(g: Graph) -> set[frozenset]:
    """Vertex pairs whose separation classes admit a split with at least two
    edges on each side, found directly from the definitions."""
    out = set()
    for a, b in itertools.combinations(sorted(g.vertices), 2):
        sizes = [1 for e in g.edge_ids() if set(g.endpoints(e)) == {a, b}]
        rest = g.without_vertices({a, b})
        verts, seen = set(rest.vertices), set()
        while verts - seen:
            start = min(verts - seen)
            comp = {start}
            stack = [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                for e in rest.incident_edges(v):
                    w = rest.other_end(e, v)
                    if w not in seen:
                        seen.add(w)
                        comp.add(w)
                        stack.append(w)
            cls = [
                e
                for e in g.edge_ids()
                if set(g.endpoints(e)) & comp
            ]
            sizes.append(len(cls))
        total = sum(sizes)
        if len(sizes) >= 2 and any(
            2 <= s <= total - 2 or 2 <= total - s <= total - 2
            for s in sizes
        ):
            ok = False
            sizes.sort(reverse=True)
            for i in range(1, len(sizes)):
                s1 = sum(sizes[:i])
                if s1 >= 2 and total - s1 >= 2:
                    ok = True
            if ok:
                out.add(frozenset((a, b)))
    return out


# ---------------------------------------------------------------------------
# Build shapes
# ---------------------------------------------------------------------------


def test_rejects_non_biconnected():
    g = Graph(range(3), [(0, 1), (1, 2)])
    with pytest.raises(NotBiconnectedError):
        build_spqr(g)


def test_cycle_is_single_s_node():
    t = build_spqr(cycle(5))
    t.validate()
    kinds = sorted(n.kind for n in t.nodes.values())
    assert kinds.count("S") == 1
    assert kinds.count("Q") == 5
    assert kinds.count("P") == 0 and kinds.count("R") == 0


def test_k4_is_single_r_node():
    t = build_spqr(k4())
    t.validate()
    kinds = [n.kind for n in t.nodes.values()]
    assert kinds.count("R") == 1
    assert kinds.count("Q") == 6
    r = next(n for n in t.nodes.values() if n.kind == "R")
    assert r.skeleton.num_vertices() == 4 and r.skeleton.num_edges() == 6


def test_c4_chord_decomposition():
    g = c4_chord()
    # the only nontrivial split pair of this graph is {0, 2}
    assert brute_force_split_pairs(g) == {frozenset((0, 2))}
    t = build_spqr(g)
    t.validate()
    kinds = sorted(n.kind for n in t.nodes.values())
    assert kinds.count("P") == 1
    assert kinds.count("S") == 2
    assert kinds.count("Q") == 5
    p = next(n for n in t.nodes.values() if n.kind == "P")
    assert set(p.skeleton.vertices) == {0, 2}
    assert p.skeleton.num_edges() == 3
    s_nodes = [n for n in t.nodes.values() if n.kind == "S"]
    assert sorted(sorted(n.skeleton.vertices) for n in s_nodes) == [[0, 1, 2], [0, 2, 3]]


# ---------------------------------------------------------------------------
# Pertinent graphs
# ---------------------------------------------------------------------------


def test_pertinent_of_q_node_is_single_edge():
    t = build_spqr(c4_chord())
    for q in t.q_nodes():
        if q == t.root:
            continue
        pg = t.pertinent_graph(q)
        assert pg.num_edges() == 1


def test_pertinent_of_root_child_is_rest_of_graph():
    t = build_spqr(c4_chord())
    (child,) = t.nodes[t.root].children()
    pg = t.pertinent_graph(child)
    root_edge = t.real_edge_of_q(t.root)
    assert set(pg.edges) == set(t.graph.edges) - {root_edge}


def test_pertinent_of_s_child_of_p_is_two_edge_path():
    t = build_spqr(c4_chord())
    p = next(i for i, n in t.nodes.items() if n.kind == "P")
    s_children = [c for c in t.nodes[p].children() if t.nodes[c].kind == "S"]
    for s in s_children:
        pg = t.pertinent_graph(s)
        assert pg.num_edges() == 2


def test_root_has_no_pertinent_graph():
    t = build_spqr(c4_chord())
    with pytest.raises(Exception):
        t.pertinent_graph(t.root)


# ---------------------------------------------------------------------------
# Rerooting
# ---------------------------------------------------------------------------


def test_reroot_identity():
    t = build_spqr(c4_chord())
    t2 = t.reroot(t.root)
    assert t2.canonical_form() == t.canonical_form()
    assert t2.root == t.root


def test_reroot_all_q_nodes_same_canonical_form():
    t = build_spqr(c4_chord())
    forms = set()
    for q in t.q_nodes():
        t2 = t.reroot(q)
        t2.validate()
        forms.add(t2.canonical_form())
    assert len(forms) == 1


def test_reroot_k4_keeps_r_skeleton():
    t = build_spqr(k4())
    for q in t.q_nodes():
        t2 = t.reroot(q)
        r = next(n for n in t2.nodes.values() if n.kind == "R")
        assert r.skeleton.num_edges() == 6


# ---------------------------------------------------------------------------
# Structural invariants on random biconnected graphs
# ---------------------------------------------------------------------------


def random_biconnected(rng: random.Random, n: int) -> Graph:
    verts = list(range(n))
    rng.shuffle(verts)
    edges = {frozenset((verts[i], verts[(i + 1) % n])) for i in range(n)}
    extra = rng.randint(0, 2 * n)
    for _ in range(extra):
        a, b = rng.sample(range(n), 2)
        edges.add(frozenset((a, b)))
    return Graph(range(n), [tuple(sorted(e)) for e in sorted(edges, key=sorted)])


def test_structural_invariants_random_sample():
    rng = random.Random(42)
    for _ in range(60):
        n = rng.randint(3, 16)
        g = random_biconnected(rng, n)
        assert is_biconnected(g)
        t = build_spqr(g)
        t.validate()
        assert sorted(
            geid for q in t.q_nodes() for geid in t.nodes[q].real_edges()
        ) == g.edge_ids()


# ---------------------------------------------------------------------------
# Embedding enumeration
# ---------------------------------------------------------------------------


def raw_embedding_count_up_to_reflection(g: Graph) -> int:
    seen = set()
    for emb in all_rotation_systems(g):
        if not emb.euler_genus_zero():
            continue
        key = emb.canonical_key()
        mk = emb.mirrored().canonical_key()
        seen.add(min(key, mk))
    return len(seen)


def test_cycle_has_one_embedding():
    t = build_spqr(cycle(5))
    assert len(list(enumerate_planar_embeddings(t))) == 1


def test_k4_has_one_embedding_up_to_reflection():
    t = build_spqr(k4())
    assert len(list(enumerate_planar_embeddings(t))) == 1


def test_c4_chord_embedding_count_matches_raw_enumeration():
    g = c4_chord()
    expected = raw_embedding_count_up_to_reflection(g)
    t = build_spqr(g)
    got = len(list(enumerate_planar_embeddings(t)))
    assert got == expected == 1


def test_enumeration_agrees_with_raw_on_small_biconnected_planar():
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    checked = 0
    for nxg in graph_atlas_g():
        n = nxg.number_of_nodes()
        if n < 3 or n > 5:
            continue
        if not nx.is_biconnected(nxg) or not nx.check_planarity(nxg)[0]:
            continue
        g = Graph(range(n), [tuple(e) for e in nxg.edges()])
        t = build_spqr(g)
        expected_keys = set()
        for emb in all_rotation_systems(g):
            if emb.euler_genus_zero():
                expected_keys.add(
                    min(emb.canonical_key(), emb.mirrored().canonical_key())
                )
        got = list(enumerate_planar_embeddings(t))
        got_keys = {
            min(e.canonical_key(), e.mirrored().canonical_key()) for e in got
        }
        assert len(got) == len(got_keys), "enumerator must not repeat"
        assert got_keys == expected_keys
        checked += 1
    assert checked == 13
