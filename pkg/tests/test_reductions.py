from __future__ import annotations

import itertools

import pytest

from corefacial.graph import Graph
from corefacial.instances import (
    HppInstance,
    InstanceError,
    PepInstance,
    PRIMARY,
    SECONDARY,
    TERTIARY,
)
from corefacial.planarity import planar_embedding
from corefacial.graph import restrict_embedding
from corefacial.oracle import fccp_oracle, hpp_oracle
from corefacial.reductions import (
    cross_allowed,
    fccp_to_hpp,
    hpp_to_fccp,
    pep_to_fccp,
    pp_to_hpp,
)


# ---------------------------------------------------------------------------
# Crossing predicate
# ---------------------------------------------------------------------------


def test_cross_allowed_truth_table():
    assert cross_allowed(TERTIARY, TERTIARY)
    assert cross_allowed(SECONDARY, TERTIARY)
    assert not cross_allowed(PRIMARY, TERTIARY)
    assert not cross_allowed(SECONDARY, SECONDARY)
    assert not cross_allowed(PRIMARY, SECONDARY)
    assert not cross_allowed(PRIMARY, PRIMARY)


def test_cross_allowed_symmetric_and_monotone():
    for a, b in itertools.product((1, 2, 4), repeat=2):
        assert cross_allowed(a, b) == cross_allowed(b, a)
        # lowering one weight never forbids an allowed crossing
        for c in (1, 2, 4):
            if c <= b and cross_allowed(a, b):
                assert cross_allowed(a, c)


def test_cross_allowed_rejects_other_weights():
    with pytest.raises(InstanceError):
        cross_allowed(3, 1)


# ---------------------------------------------------------------------------
# Weighted model <-> pair model
# ---------------------------------------------------------------------------


def c4_hpp(chord_class: str) -> HppInstance:
    g = Graph(
        ["v1", "v2", "v3", "v4"],
        [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1"), ("v2", "v4")],
    )
    classes = {0: "p", 1: "p", 2: "p", 3: "p", 4: chord_class}
    return HppInstance(g, classes)


def test_all_primary_maps_to_empty_pairs():
    g = Graph(range(3), [(0, 1), (1, 2), (2, 0)])
    inst = hpp_to_fccp(HppInstance(g, {0: "p", 1: "p", 2: "p"}))
    assert inst.pairs == frozenset()
    assert inst.core == frozenset(range(3))
    assert inst.noncore == frozenset()


def test_tertiary_edge_becomes_pair_and_leaves_graph():
    inst = hpp_to_fccp(c4_hpp("t"))
    assert inst.pairs == frozenset({("v2", "v4")})
    assert all(set(inst.graph.endpoints(e)) != {"v2", "v4"} for e in inst.graph.edges)
    assert inst.graph.num_edges() == 4


def test_k4_apex_reduction_matches_direct_instance():
    verts = ["a", "b", "c", "d", "e"]
    k4 = list(itertools.combinations(["a", "b", "c", "d"], 2))
    g = Graph(verts, k4 + [("e", "a"), ("e", "b"), ("e", "c"), ("e", "d")])
    classes = {i: "p" for i in range(6)}
    classes.update({6: "s", 7: "s", 8: "s", 9: "t"})
    inst = hpp_to_fccp(HppInstance(g, classes))
    assert inst.pairs == frozenset({("d", "e")})
    assert not fccp_oracle(inst)


def test_round_trip_is_identity():
    inst = hpp_to_fccp(c4_hpp("t"))
    back = fccp_to_hpp(inst)
    again = hpp_to_fccp(back)
    assert again.graph == inst.graph
    assert again.core == inst.core
    assert again.pairs == inst.pairs


def test_fccp_to_hpp_rejects_pair_on_existing_edge():
    g = Graph(range(3), [(0, 1), (1, 2), (2, 0)])
    from corefacial.instances import FccpInstance

    inst = FccpInstance.build(g, [0], [(1, 2)])
    with pytest.raises(InstanceError) as err:
        fccp_to_hpp(inst)
    assert "(1, 2)" in str(err.value)


def test_empty_pairs_gives_no_tertiary():
    from corefacial.instances import FccpInstance

    g = Graph(range(3), [(0, 1), (1, 2), (2, 0)])
    h = fccp_to_hpp(FccpInstance.build(g, [0, 1], []))
    assert h.edges_of_class("t") == frozenset()


# ---------------------------------------------------------------------------
# Partial planarity
# ---------------------------------------------------------------------------


def test_pp_all_protected_is_pure_planarity():
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    h = pp_to_hpp(g, g.edge_ids())
    assert h.edges_of_class("p") == frozenset(g.edge_ids())
    assert h.edges_of_class("t") == frozenset()
    assert hpp_oracle(h)


def test_pp_nothing_protected_always_satisfiable():
    g = Graph(range(5), list(itertools.combinations(range(5), 2)))  # K5
    h = pp_to_hpp(g, [])
    # the empty core leaves one all-containing region, so the pair
    # constraints are vacuous as long as the remaining graph is planar;
    # with nothing primary or secondary the graph shrinks to nothing
    assert hpp_oracle(h)


def test_pp_spanning_cycle_of_k5():
    g = Graph(range(5), list(itertools.combinations(range(5), 2)))
    cycle_edges = [
        e for e in g.edge_ids() if g.endpoints(e) in
        {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}
    ]
    assert len(cycle_edges) == 5
    h = pp_to_hpp(g, cycle_edges)
    # frozen from the exhaustive oracle: the five chords of the pentagon
    # can all be drawn crossing only each other
    assert hpp_oracle(h) is True


# ---------------------------------------------------------------------------
# Embedding extension
# ---------------------------------------------------------------------------


def test_pep_k4_fixed_part_yields_no_pairs():
    k4 = list(itertools.combinations(range(4), 2))
    g = Graph(range(4), k4)
    emb = planar_embedding(g)
    p = PepInstance(g, frozenset(g.edge_ids()), emb)
    inst = pep_to_fccp(p)
    assert inst.pairs == frozenset()


def test_pep_c4_fixed_part_yields_diagonals():
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    emb = planar_embedding(g)
    p = PepInstance(g, frozenset(g.edge_ids()), emb)
    inst = pep_to_fccp(p)
    assert inst.pairs == frozenset({(0, 2), (1, 3)})


def test_pep_c6_plus_chord_pair_count():
    # non-adjacent pairs of a hexagon: 15 - 6 = 9
    edges = [(i, (i + 1) % 6) for i in range(6)]
    g = Graph(range(6), edges + [(0, 3)])
    h = g.subgraph_of_edges(range(6))
    emb = restrict_embedding(planar_embedding(g), range(6))
    p = PepInstance(g, frozenset(range(6)), emb)
    inst = pep_to_fccp(p)
    assert len(inst.pairs) == 9


def test_pep_rejects_non_biconnected_fixed_part():
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    emb = planar_embedding(g)
    with pytest.raises(InstanceError):
        PepInstance(g, frozenset([0, 1]), restrict_embedding(emb, [0, 1]))
