"""Brute-force ground truth for small instances.

The decider enumerates every rotation system of the instance graph, keeps
the ones that satisfy Euler's formula, and checks each constraint pair for a
shared face of the core restriction (faces of deleted-edge regions collapse,
so vertices that the restriction isolates are handled by containment).

Enumeration size is the product of (deg - 1)! over the vertices, so the
default vertex cap keeps it around 10^7 in the worst case; instances above
the cap are rejected outright rather than sampled.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .graph import (
    CombinatorialEmbedding,
    Graph,
    GraphError,
    all_rotation_systems,
    id_sort_key,
    is_connected,
    merged_face_classes,
    vertex_face_classes,
)
from .instances import FccpInstance, HppInstance

DEFAULT_VERTEX_CAP = 9


class OracleCapExceeded(GraphError):
    """Instance too large for exhaustive search; use the solver instead."""


def rotation_space_size(g: Graph) -> int:
    return math.prod(max(1, math.factorial(g.degree(v) - 1)) for v in g.vertices)


@lru_cache(maxsize=256)
def planar_rotation_systems(g: Graph) -> tuple[CombinatorialEmbedding, ...]:
    """All rotation systems of g passing the Euler check (cached per graph)."""
    return tuple(emb for emb in all_rotation_systems(g) if emb.euler_genus_zero())


def _check_cap(g: Graph, cap: int | None) -> None:
    cap = DEFAULT_VERTEX_CAP if cap is None else cap
    if g.num_vertices() > cap:
        raise OracleCapExceeded(
            f"{g.num_vertices()} vertices exceeds the oracle cap {cap}; "
            "use the tree-based solver for larger instances"
        )


def embedding_satisfies(emb: CombinatorialEmbedding, core, pairs) -> bool:
    """True when every pair shares a face of the core restriction of emb."""
    dart_class, _ = merged_face_classes(emb, frozenset(core))
    for x, y in pairs:
        cx = vertex_face_classes(emb, dart_class, x)
        cy = vertex_face_classes(emb, dart_class, y)
        if not cx & cy:
            return False
    return True


def fccp_oracle(inst: FccpInstance, cap: int | None = None) -> bool:
    """Exhaustive decision of a core-facial instance.

    True iff some planar rotation system of the instance graph satisfies
    every constraint pair. Raises on disconnected graphs or when the vertex
    cap is exceeded.
    """
    g = inst.graph
    if g.num_edges() == 0:
        return True  # bare points in the plane share the one region
    if not is_connected(g):
        raise GraphError("oracle requires a connected graph")
    _check_cap(g, cap)
    for emb in planar_rotation_systems(g):
        if embedding_satisfies(emb, inst.core, inst.pairs):
            return True
    return False


def hpp_oracle(inst: HppInstance, cap: int | None = None) -> bool:
    """Oracle for the three-level crossing model, via the pair reduction."""
    from .reductions import hpp_to_fccp

    return fccp_oracle(hpp_to_fccp(inst), cap=cap)


def check_requirements(
    emb: CombinatorialEmbedding, core, pairs
) -> tuple[set, set]:
    """Audit one embedding: which pairs share a core face and which do not."""
    dart_class, _ = merged_face_classes(emb, frozenset(core))
    satisfied, violated = set(), set()
    for pair in pairs:
        x, y = pair
        cx = vertex_face_classes(emb, dart_class, x)
        cy = vertex_face_classes(emb, dart_class, y)
        (satisfied if cx & cy else violated).add(pair)
    return satisfied, violated


def cofacial_pair_families(g: Graph, core) -> list[frozenset]:
    """Per planar embedding, the set of co-facial vertex pairs.

    Reduced to maximal sets; a pair collection is satisfiable exactly when
    it is contained in one of these. Test-harness helper for sweeping many
    pair sets over one colored graph.
    """
    verts = sorted(g.vertices, key=id_sort_key)
    families: list[frozenset] = []
    for emb in planar_rotation_systems(g):
        dart_class, _ = merged_face_classes(emb, frozenset(core))
        classes = {v: vertex_face_classes(emb, dart_class, v) for v in verts}
        fam = frozenset(
            (a, b)
            for i, a in enumerate(verts)
            for b in verts[i + 1 :]
            if classes[a] & classes[b]
        )
        if any(fam <= old for old in families):
            continue
        families = [old for old in families if not old <= fam]
        families.append(fam)
    return families
