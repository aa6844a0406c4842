"""The weighted crossing model and reductions between the problems.

Edges carry importance weights 4 (primary), 2 (secondary) and 1 (tertiary);
a crossing between two edges is allowed exactly when their weights sum to
at most 3. Deciding drawability under that rule is equivalent to the
core-facial question: primary edges become the core, secondary edges the
rest of the graph, and each tertiary edge contributes the pair of its
endpoints. Partial planarity and embedding extension over a biconnected
fixed part reduce to the same form.
"""

from __future__ import annotations

from .graph import Graph, compute_faces, id_sort_key, is_biconnected
from .instances import (
    FccpInstance,
    HppInstance,
    InstanceError,
    PepInstance,
    PRIMARY,
    SECONDARY,
    TERTIARY,
    normalize_pair,
)

_VALID_WEIGHTS = (PRIMARY, SECONDARY, TERTIARY)


def cross_allowed(w1: int, w2: int) -> bool:
    """May two edges of these weights cross? Yes iff w1 + w2 <= 3."""
    if w1 not in _VALID_WEIGHTS or w2 not in _VALID_WEIGHTS:
        raise InstanceError(f"weights must be in {_VALID_WEIGHTS}, got {w1}, {w2}")
    return w1 + w2 <= 3


def hpp_to_fccp(h: HppInstance) -> FccpInstance:
    """Primary edges become the core, secondary stay, each tertiary edge
    turns into the pair of its endpoints."""
    keep = {
        eid: h.graph.endpoints(eid)
        for eid, cls in h.classes.items()
        if cls != "t"
    }
    pairs = {
        normalize_pair(*h.graph.endpoints(eid))
        for eid, cls in h.classes.items()
        if cls == "t"
    }
    g = Graph(h.graph.vertices, keep)
    core = frozenset(e for e in keep if h.classes[e] == "p")
    return FccpInstance(g, core, frozenset(pairs))


def fccp_to_hpp(f: FccpInstance) -> HppInstance:
    """Inverse direction: each pair becomes a tertiary edge.

    A pair whose endpoints are already adjacent would need a parallel
    edge, which the weighted model's simple graph cannot carry; such
    instances are rejected with the offending pair named.
    """
    existing = {frozenset(f.graph.endpoints(e)): e for e in f.graph.edges}
    edges = dict(f.graph.edges)
    classes = {
        eid: ("p" if eid in f.core else "s") for eid in edges
    }
    next_id = max(edges, default=-1) + 1
    for pair in sorted(f.pairs):
        if frozenset(pair) in existing:
            raise InstanceError(
                f"pair {pair!r} duplicates an existing edge; "
                "no simple weighted instance exists"
            )
        edges[next_id] = pair
        classes[next_id] = "t"
        next_id += 1
    return HppInstance(Graph(f.graph.vertices, edges), classes)


def pp_to_hpp(g: Graph, protected) -> HppInstance:
    """Partial planarity: protected edges must stay crossing-free, all
    others may cross freely, so they weigh 4 and 1 with nothing secondary."""
    protected = frozenset(protected)
    if not protected <= set(g.edges):
        raise InstanceError("protected set contains unknown edge ids")
    classes = {eid: ("p" if eid in protected else "t") for eid in g.edges}
    return HppInstance(g, classes)


def pep_to_fccp(p: PepInstance) -> FccpInstance:
    """Embedding extension with a biconnected fixed part.

    The fixed edges become the core and every co-facial non-adjacent
    vertex pair of the fixed embedding becomes a constraint pair; since
    the fixed part is biconnected, the face cycles determine the given
    embedding up to reflection, so extendability coincides with the
    core-facial question.
    """
    h = p.graph.subgraph_of_edges(p.fixed_edges)
    adjacent = {frozenset(h.endpoints(e)) for e in h.edges}
    pairs = set()
    for face in compute_faces(p.fixed_embedding):
        verts = sorted(face.vertices, key=id_sort_key)
        for i, u in enumerate(verts):
            for v in verts[i + 1 :]:
                if frozenset((u, v)) not in adjacent:
                    pairs.add(normalize_pair(u, v))
    return FccpInstance(p.graph, frozenset(p.fixed_edges), frozenset(pairs))
