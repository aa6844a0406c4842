"""Problem instances shared by the solver, the reductions and the oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import CombinatorialEmbedding, Graph, GraphError, id_sort_key, is_biconnected


class InstanceError(GraphError):
    """Malformed problem instance."""


def normalize_pair(x, y) -> tuple:
    if x == y:
        raise InstanceError(f"pair endpoints must differ, got {x!r} twice")
    a, b = sorted((x, y), key=id_sort_key)
    return (a, b)


@dataclass(frozen=True)
class FccpInstance:
    """Core-facial constrained planarity instance.

    ``core`` holds the edge ids of the core (class-1) edges; the remaining
    edges of ``graph`` are class 2. ``pairs`` are unordered vertex pairs that
    must share a face of the embedding restricted to the core.
    """

    graph: Graph
    core: frozenset
    pairs: frozenset

    def __post_init__(self):
        if self.graph.skeleton:
            raise InstanceError("instance graph must be simple")
        eids = set(self.graph.edges)
        if not set(self.core) <= eids:
            raise InstanceError("core contains unknown edge ids")
        for pair in self.pairs:
            x, y = pair
            if x == y:
                raise InstanceError(f"degenerate pair {pair!r}")
            if x not in self.graph.vertices or y not in self.graph.vertices:
                raise InstanceError(f"pair {pair!r} has unknown endpoint")
            if pair != normalize_pair(x, y):
                raise InstanceError(f"pair {pair!r} is not normalized")

    @staticmethod
    def build(graph: Graph, core, pairs) -> "FccpInstance":
        normalized = frozenset(normalize_pair(x, y) for x, y in pairs)
        return FccpInstance(graph, frozenset(core), normalized)

    @property
    def noncore(self) -> frozenset:
        return frozenset(set(self.graph.edges) - set(self.core))


PRIMARY = 4
SECONDARY = 2
TERTIARY = 1

_CLASS_WEIGHTS = {"p": PRIMARY, "s": SECONDARY, "t": TERTIARY}


@dataclass(frozen=True)
class HppInstance:
    """Three-level edge importance instance.

    ``classes`` maps every edge id of ``graph`` to 'p', 's' or 't'
    (weights 4, 2 and 1).
    """

    graph: Graph
    classes: dict = field(hash=False)

    def __post_init__(self):
        if self.graph.skeleton:
            raise InstanceError("instance graph must be simple")
        if set(self.classes) != set(self.graph.edges):
            raise InstanceError("edge classes must cover exactly the edge set")
        bad = {c for c in self.classes.values() if c not in _CLASS_WEIGHTS}
        if bad:
            raise InstanceError(f"unknown edge classes {sorted(bad)!r}")

    def weight(self, eid: int) -> int:
        return _CLASS_WEIGHTS[self.classes[eid]]

    def edges_of_class(self, cls: str) -> frozenset:
        return frozenset(e for e, c in self.classes.items() if c == cls)


@dataclass(frozen=True)
class PepInstance:
    """Embedding-extension instance with a biconnected fixed part.

    ``fixed_edges`` are the edges of the pre-embedded subgraph and
    ``fixed_embedding`` is its planar embedding.
    """

    graph: Graph
    fixed_edges: frozenset
    fixed_embedding: CombinatorialEmbedding

    def __post_init__(self):
        if not set(self.fixed_edges) <= set(self.graph.edges):
            raise InstanceError("fixed part is not a subgraph")
        h = self.graph.subgraph_of_edges(self.fixed_edges)
        if not is_biconnected(h):
            raise InstanceError("fixed part must be biconnected")
        if self.fixed_embedding.host != h:
            raise InstanceError("fixed embedding host differs from the fixed part")
        if not self.fixed_embedding.euler_genus_zero():
            raise InstanceError("fixed embedding is not planar")
