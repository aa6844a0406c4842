from __future__ import annotations

import itertools
import random

import pytest

from corefacial.fccp import (
    NEGATIVE,
    BagSet,
    FccpSolver,
    compute_traversability,
    direct_traversability,
    merge_bags,
    solve_fccp,
)
from corefacial.graph import Graph
from corefacial.instances import FccpInstance
from corefacial.oracle import fccp_oracle
from corefacial.spqr import NotBiconnectedError, build_spqr


def c4_chord_instance(chord_core: bool, pairs=(("v2", "v4"),)) -> FccpInstance:
    g = Graph(
        ["v1", "v2", "v3", "v4"],
        [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1"), ("v1", "v3")],
    )
    core = {0, 1, 2, 3} | ({4} if chord_core else set())
    return FccpInstance.build(g, core, pairs)


def k4_apex_instance(attach) -> FccpInstance:
    verts = ["a", "b", "c", "d", "e"]
    k4 = list(itertools.combinations(["a", "b", "c", "d"], 2))
    g = Graph(verts, k4 + [("e", v) for v in attach])
    return FccpInstance.build(g, range(6), [("e", "d")])


# ---------------------------------------------------------------------------
# merge_bags case split
# ---------------------------------------------------------------------------


def test_merge_special_member_changes_nothing():
    bs = BagSet(0)
    bs.add_special("x4")
    bs.add_bag({"x6"}, set())
    before = bs.canonical()
    assert merge_bags(bs, ("x4", "x6")) is bs
    assert bs.canonical() == before


def test_merge_same_pocket_changes_nothing():
    bs = BagSet(0)
    bs.add_bag({"x1", "x2"}, {"x3"})
    before = bs.canonical()
    assert merge_bags(bs, ("x1", "x2")) is bs
    assert bs.canonical() == before


def test_merge_opposite_pockets_is_negative():
    bs = BagSet(0)
    bs.add_bag({"x1"}, {"x5"})
    assert merge_bags(bs, ("x1", "x5")) is NEGATIVE


def test_merge_distinct_bags_unites_pockets():
    bs = BagSet(0)
    bs.add_bag({"x2"}, {"a"})
    bs.add_bag({"b"}, {"x5"})
    assert merge_bags(bs, ("x2", "x5")) is bs
    (bag,) = bs.live_bags()
    assert bag.canonical() == (("a", "b"), ("x2", "x5"))


def test_merge_preserves_partition():
    bs = BagSet(0)
    bs.add_bag({"p"}, {"q"})
    bs.add_bag({"r"}, {"s"})
    merge_bags(bs, ("p", "r"))
    assert bs.all_vertices() == {"p", "q", "r", "s"}
    assert bs.locate("p") == bs.locate("r")
    assert bs.locate("q") == bs.locate("s")
    assert bs.locate("p") != bs.locate("q")


# ---------------------------------------------------------------------------
# Traversability
# ---------------------------------------------------------------------------


def traversability_case(chord_core: bool):
    inst = c4_chord_instance(chord_core)
    tree = build_spqr(inst.graph)
    trav = compute_traversability(tree, frozenset(inst.core))
    return inst, tree, trav


def test_q_node_of_core_edge_has_inside_path():
    inst, tree, trav = traversability_case(chord_core=True)
    for q in tree.q_nodes():
        if q == tree.root:
            continue
        geid = tree.real_edge_of_q(q)
        assert trav.inside[q] == (geid in inst.core)


def test_chord_q_node_is_traversable_when_noncore():
    inst, tree, trav = traversability_case(chord_core=False)
    chord_q = next(
        q
        for q in tree.q_nodes()
        if q != tree.root
        and set(inst.graph.endpoints(tree.real_edge_of_q(q))) == {"v1", "v3"}
    )
    assert not trav.inside[chord_q]
    assert trav.traversable(chord_q)


def test_two_edge_path_node_is_non_traversable():
    # pert = v1-v2-v3 with the complementary core path v1-v4-v3 present
    inst, tree, trav = traversability_case(chord_core=False)
    s_nodes = [
        n
        for n, nd in tree.nodes.items()
        if nd.kind == "S" and tree.pertinent_edge_ids(n) <= {0, 1, 2, 3}
        and len(tree.pertinent_edge_ids(n)) == 2
    ]
    assert s_nodes
    for s in s_nodes:
        assert trav.non_traversable(s)


def test_two_pass_matches_direct_search():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(3, 9)
        verts = list(range(n))
        rng.shuffle(verts)
        edges = {frozenset((verts[i], verts[(i + 1) % n])) for i in range(n)}
        for _ in range(rng.randint(0, n)):
            a, b = rng.sample(range(n), 2)
            edges.add(frozenset((a, b)))
        g = Graph(range(n), [tuple(sorted(e)) for e in sorted(edges, key=sorted)])
        tree = build_spqr(g)
        eids = g.edge_ids()
        core = frozenset(e for e in eids if rng.random() < 0.6)
        fast = compute_traversability(tree, core)
        slow = direct_traversability(tree, core)
        for nid in tree.nodes:
            if nid == tree.root:
                continue
            assert fast.inside[nid] == slow.inside[nid], (g.edges, sorted(core), nid)
            assert fast.outside[nid] == slow.outside[nid], (g.edges, sorted(core), nid)


# ---------------------------------------------------------------------------
# End-to-end verdicts
# ---------------------------------------------------------------------------


def test_cycle_pair_positive():
    g = Graph(["v1", "v2", "v3", "v4"], [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")])
    inst = FccpInstance.build(g, range(4), [("v1", "v3")])
    assert solve_fccp(inst, validate=True)


def test_k4_apex_three_attachments_negative():
    assert not solve_fccp(k4_apex_instance(["a", "b", "c"]), validate=True)


def test_k4_apex_two_attachments_positive():
    assert solve_fccp(k4_apex_instance(["a", "b"]), validate=True)


def test_k5_negative_for_any_classes():
    g = Graph(range(5), list(itertools.combinations(range(5), 2)))
    assert not solve_fccp(FccpInstance.build(g, range(10), []))


def test_non_biconnected_raises_not_returns_no():
    g = Graph(range(3), [(0, 1), (1, 2)])
    with pytest.raises(NotBiconnectedError):
        solve_fccp(FccpInstance.build(g, range(2), []))


def test_empty_pairs_is_planarity():
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert solve_fccp(FccpInstance.build(g, [], []))


def test_core_adjacent_pair_discharged():
    g = Graph(range(3), [(0, 1), (1, 2), (2, 0)])
    inst = FccpInstance.build(g, range(3), [(0, 1)])
    assert solve_fccp(inst, validate=True)


def test_two_vertex_graph_is_positive():
    g = Graph(["u", "v"], [("u", "v")])
    assert solve_fccp(FccpInstance.build(g, [], [("u", "v")]))


def test_trace_lines_are_emitted():
    trace: list[str] = []
    solve_fccp(k4_apex_instance(["a", "b", "c"]), trace=trace)
    assert any("kind=R" in line for line in trace)
    assert any("NEGATIVE" in line for line in trace)


# ---------------------------------------------------------------------------
# Properties: root invariance, monotonicity, oracle agreement
# ---------------------------------------------------------------------------


def random_planar_biconnected(rng: random.Random, n: int) -> Graph:
    import networkx as nx

    verts = list(range(n))
    rng.shuffle(verts)
    edges = [frozenset((verts[i], verts[(i + 1) % n])) for i in range(n)]
    nxg = nx.Graph([tuple(e) for e in edges])
    attempts = [
        tuple(rng.sample(range(n), 2)) for _ in range(3 * n)
    ]
    for a, b in attempts:
        if nxg.has_edge(a, b):
            continue
        nxg.add_edge(a, b)
        if not nx.check_planarity(nxg)[0]:
            nxg.remove_edge(a, b)
    return Graph(range(n), sorted(tuple(sorted(e)) for e in nxg.edges()))


def random_instance(rng: random.Random, n: int) -> FccpInstance:
    g = random_planar_biconnected(rng, n)
    core = [e for e in g.edge_ids() if rng.random() < 0.65]
    pairs = set()
    for _ in range(rng.randint(0, 3)):
        x, y = rng.sample(range(n), 2)
        pairs.add((min(x, y), max(x, y)))
    return FccpInstance.build(g, core, pairs)


def test_root_invariance_on_random_instances():
    rng = random.Random(5)
    for _ in range(30):
        inst = random_instance(rng, rng.randint(4, 7))
        tree = build_spqr(inst.graph)
        verdicts = set()
        for q in tree.q_nodes():
            solver = FccpSolver(inst.graph)
            solver.tree = tree.reroot(q)
            verdicts.add(solver.solve(inst.core, inst.pairs, validate=True))
        assert len(verdicts) == 1


def test_monotone_in_pairs():
    rng = random.Random(6)
    for _ in range(40):
        inst = random_instance(rng, rng.randint(4, 7))
        if not inst.pairs:
            continue
        if solve_fccp(inst):
            for drop in inst.pairs:
                smaller = FccpInstance.build(
                    inst.graph, inst.core, set(inst.pairs) - {drop}
                )
                assert solve_fccp(smaller)


def test_agrees_with_oracle_on_random_sample():
    from corefacial.oracle import rotation_space_size

    rng = random.Random(7)
    checked = 0
    while checked < 120:
        inst = random_instance(rng, rng.randint(4, 7))
        if rotation_space_size(inst.graph) > 20000:
            continue
        checked += 1
        assert solve_fccp(inst, validate=True) == fccp_oracle(inst)
