"""Labeled multigraphs, rotation systems and face structure.

A graph is a set of vertices plus edges with stable integer ids. Inputs are
simple (no loops, no parallel edges); graphs flagged as skeletons may carry
parallel edges, which decomposition skeletons need.

A combinatorial embedding is a rotation system: a cyclic order of incident
edges around every vertex. Faces are the orbits of the dart permutation
``dart -> successor of its reversal``; for a connected host the rotation is
planar exactly when V - E + F = 2.

``faces_of_vertex_in_restriction`` answers "which faces of the drawing of a
subgraph contain vertex v", including vertices that become isolated when the
other edges are deleted: deleting edges merges the regions on their two
sides, so the answer is computed by collapsing the host's faces along the
deleted edges rather than by re-tracing the subgraph alone. That collapse is
also what makes co-facility queries well defined when the subgraph is
disconnected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


def id_sort_key(value) -> tuple[str, str]:
    """Total deterministic order over mixed-type vertex ids."""
    return (value.__class__.__name__, repr(value))


class GraphError(ValueError):
    """Invalid graph construction or query."""


class Graph:
    """Undirected multigraph with integer edge ids.

    Vertices are arbitrary hashable ids. Self-loops are always rejected;
    parallel edges are rejected unless ``skeleton=True``.
    """

    __slots__ = ("_vertices", "_edges", "_incidence", "skeleton", "_hash")

    def __init__(
        self,
        vertices: Iterable,
        edges: Mapping[int, tuple] | Iterable[tuple],
        *,
        skeleton: bool = False,
    ) -> None:
        self._vertices = frozenset(vertices)
        if isinstance(edges, Mapping):
            items = [(int(k), (u, v)) for k, (u, v) in edges.items()]
        else:
            items = [(i, (u, v)) for i, (u, v) in enumerate(edges)]
        edict: dict[int, tuple] = {}
        seen_pairs: set[frozenset] = set()
        for eid, (u, v) in items:
            if eid in edict:
                raise GraphError(f"duplicate edge id {eid}")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            if u not in self._vertices or v not in self._vertices:
                raise GraphError(f"edge ({u!r}, {v!r}) has unknown endpoint")
            pair = frozenset((u, v))
            if pair in seen_pairs and not skeleton:
                raise GraphError(f"parallel edge ({u!r}, {v!r}) in non-skeleton graph")
            seen_pairs.add(pair)
            edict[eid] = (u, v)
        self._edges = edict
        self.skeleton = skeleton
        inc: dict = {v: [] for v in self._vertices}
        for eid in sorted(edict):
            u, v = edict[eid]
            inc[u].append(eid)
            inc[v].append(eid)
        self._incidence = {v: tuple(es) for v, es in inc.items()}
        self._hash = hash(
            (self._vertices, tuple(sorted((k, *sorted(uv, key=id_sort_key)) for k, uv in edict.items())), skeleton)
        )

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def edges(self) -> dict[int, tuple]:
        return dict(self._edges)

    def edge_ids(self) -> list[int]:
        return sorted(self._edges)

    def endpoints(self, eid: int) -> tuple:
        return self._edges[eid]

    def other_end(self, eid: int, v):
        u, w = self._edges[eid]
        return w if v == u else u

    def incident_edges(self, v) -> tuple[int, ...]:
        return self._incidence[v]

    def degree(self, v) -> int:
        return len(self._incidence[v])

    def num_vertices(self) -> int:
        return len(self._vertices)

    def num_edges(self) -> int:
        return len(self._edges)

    def sorted_vertices(self) -> list:
        return sorted(self._vertices, key=id_sort_key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._edges == other._edges
            and self.skeleton == other.skeleton
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    # -- derived graphs ----------------------------------------------------

    def subgraph_of_edges(self, keep: Iterable[int]) -> "Graph":
        """Edge-induced subgraph; vertices without a kept edge are dropped."""
        keep = set(keep)
        edges = {eid: uv for eid, uv in self._edges.items() if eid in keep}
        verts = {v for uv in edges.values() for v in uv}
        return Graph(verts, edges, skeleton=self.skeleton)

    def without_vertices(self, drop: Iterable) -> "Graph":
        drop = set(drop)
        verts = self._vertices - drop
        edges = {
            eid: (u, v)
            for eid, (u, v) in self._edges.items()
            if u not in drop and v not in drop
        }
        return Graph(verts, edges, skeleton=self.skeleton)

    def as_simple(self) -> "Graph":
        """Same graph without the skeleton flag (fails on parallel edges)."""
        return Graph(self._vertices, self._edges, skeleton=False)


# -- connectivity ----------------------------------------------------------


def is_connected(g: Graph) -> bool:
    """True when every vertex pair is joined by a path (single vertex counts)."""
    if g.num_vertices() == 0:
        return False
    start = next(iter(g.vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for eid in g.incident_edges(v):
            w = g.other_end(eid, v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.num_vertices()


def articulation_vertices(g: Graph) -> set:
    """Cut vertices, by iterative lowpoint DFS (parallel edges allowed)."""
    index: dict = {}
    low: dict = {}
    parent_edge: dict = {}
    arts: set = set()
    counter = 0
    for root in g.sorted_vertices():
        if root in index:
            continue
        root_children = 0
        stack: list[tuple] = [(root, iter(g.incident_edges(root)))]
        index[root] = low[root] = counter
        counter += 1
        parent_edge[root] = None
        while stack:
            v, it = stack[-1]
            advanced = False
            for eid in it:
                w = g.other_end(eid, v)
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    parent_edge[w] = eid
                    if v == root:
                        root_children += 1
                    stack.append((w, iter(g.incident_edges(w))))
                    advanced = True
                    break
                elif eid != parent_edge[v]:
                    low[v] = min(low[v], index[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if u != root and low[v] >= index[u]:
                        arts.add(u)
        if root_children > 1:
            arts.add(root)
    return arts


def is_biconnected(g: Graph) -> bool:
    """Removal of any single vertex leaves the graph connected.

    A single edge on two vertices qualifies under this reading; callers that
    need three or more vertices (the decomposition) check that separately.
    """
    if g.num_vertices() < 2:
        return False
    if not is_connected(g):
        return False
    return not articulation_vertices(g)


# -- embeddings ------------------------------------------------------------

#: A dart is a directed edge occurrence: (edge id, tail vertex, head vertex).
Dart = tuple


@dataclass(frozen=True)
class Face:
    """One face of an embedding: a closed walk of darts.

    ``boundary`` is rotated to its canonical minimal form so equal faces
    compare equal across recomputation. The empty boundary is the sentinel
    for the single face of an edgeless drawing (the whole plane).
    """

    boundary: tuple[Dart, ...]
    vertices: frozenset

    @staticmethod
    def from_walk(walk: Sequence[Dart]) -> "Face":
        canon = _min_rotation(tuple(walk))
        verts = frozenset(d[1] for d in walk)
        return Face(canon, verts)

    def __len__(self) -> int:
        return len(self.boundary)


WHOLE_PLANE = Face(boundary=(), vertices=frozenset())


def _elem_key(x):
    if isinstance(x, tuple):
        return tuple(_elem_key(y) for y in x)
    return id_sort_key(x)


def _min_rotation(seq: tuple) -> tuple:
    """Lexicographically smallest rotation of a cyclic sequence."""
    if not seq:
        return seq
    rotations = [seq[i:] + seq[:i] for i in range(len(seq))]
    return min(rotations, key=lambda r: tuple(_elem_key(x) for x in r))


class CombinatorialEmbedding:
    """Rotation system over a host graph.

    ``rotation[v]`` lists the incident edge ids of ``v`` in cyclic order.
    Every incident edge occurrence must appear exactly once.
    """

    __slots__ = ("host", "rotation", "_faces", "_next")

    def __init__(self, host: Graph, rotation: Mapping[str, Sequence[int]] | Mapping) -> None:
        self.host = host
        rot: dict = {}
        for v in host.vertices:
            order = tuple(rotation[v]) if v in rotation else ()
            if sorted(order) != sorted(host.incident_edges(v)):
                raise GraphError(f"rotation at {v!r} does not cover its edge ends")
            rot[v] = order
        self.rotation = rot
        self._faces: list[Face] | None = None
        self._next: dict[Dart, Dart] | None = None

    def darts(self) -> list[Dart]:
        out = []
        for eid in self.host.edge_ids():
            u, v = self.host.endpoints(eid)
            out.append((eid, u, v))
            out.append((eid, v, u))
        return out

    def next_dart(self, dart: Dart) -> Dart:
        """Successor dart on the same face walk."""
        if self._next is None:
            self._build_next()
        return self._next[dart]

    def _build_next(self) -> None:
        succ: dict[Dart, Dart] = {}
        pos: dict[tuple, int] = {}
        for v, order in self.rotation.items():
            for i, eid in enumerate(order):
                pos[(v, eid)] = i
        for dart in self.darts():
            eid, u, v = dart
            order = self.rotation[v]
            i = pos[(v, eid)]
            nxt = order[(i + 1) % len(order)]
            succ[dart] = (nxt, v, self.host.other_end(nxt, v))
        self._next = succ

    def faces(self) -> list[Face]:
        if self._faces is None:
            self._faces = compute_faces(self)
        return self._faces

    def euler_genus_zero(self) -> bool:
        """Check V - E + F = 2 for a connected host (edgeless host: F := 1)."""
        f = len(self.faces()) if self.host.num_edges() else 1
        return self.host.num_vertices() - self.host.num_edges() + f == 2

    def mirrored(self) -> "CombinatorialEmbedding":
        return CombinatorialEmbedding(
            self.host, {v: tuple(reversed(order)) for v, order in self.rotation.items()}
        )

    def canonical_key(self):
        items = []
        for v in self.host.sorted_vertices():
            order = self.rotation[v]
            items.append((id_sort_key(v), _min_rotation(tuple(order))))
        return tuple(items)


def compute_faces(emb: CombinatorialEmbedding) -> list[Face]:
    """Trace every face walk of the rotation system.

    Always traces; whether the result is planar is the caller's Euler check.
    """
    remaining = set(emb.darts())
    faces = []
    while remaining:
        start = min(remaining, key=lambda d: (d[0], id_sort_key(d[1])))
        walk = []
        d = start
        while True:
            walk.append(d)
            remaining.discard(d)
            d = emb.next_dart(d)
            if d == start:
                break
        faces.append(Face.from_walk(walk))
    faces.sort(key=lambda f: tuple((d[0], id_sort_key(d[1])) for d in f.boundary))
    return faces


def restrict_embedding(emb: CombinatorialEmbedding, keep: Iterable[int]) -> CombinatorialEmbedding:
    """Embedding induced on an edge subset.

    Each surviving rotation is the cyclic suborder of the original; vertices
    with no kept edge are removed.
    """
    keep = set(keep)
    sub = emb.host.subgraph_of_edges(keep)
    rot = {
        v: tuple(eid for eid in emb.rotation[v] if eid in keep) for v in sub.vertices
    }
    return CombinatorialEmbedding(sub, rot)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def merged_face_classes(
    emb: CombinatorialEmbedding, keep: Iterable[int]
) -> tuple[dict[Dart, int], list[frozenset]]:
    """Collapse the host's faces along deleted edges.

    Returns (dart -> class index, class index -> member host faces). Two host
    faces land in one class when a chain of deleted edges merges their
    regions; the classes are the faces of the restricted drawing, valid even
    when the kept subgraph is disconnected or empty.
    """
    keep = set(keep)
    faces = emb.faces()
    dart_face: dict[Dart, int] = {}
    for i, f in enumerate(faces):
        for d in f.boundary:
            dart_face[d] = i
    uf = _UnionFind(range(len(faces)))
    for eid in emb.host.edge_ids():
        if eid in keep:
            continue
        u, v = emb.host.endpoints(eid)
        uf.union(dart_face[(eid, u, v)], dart_face[(eid, v, u)])
    reps = sorted({uf.find(i) for i in range(len(faces))})
    rep_index = {r: i for i, r in enumerate(reps)}
    dart_class = {d: rep_index[uf.find(i)] for d, i in dart_face.items()}
    members = [frozenset(i for i in range(len(faces)) if uf.find(i) == r) for r in reps]
    return dart_class, members


def vertex_face_classes(
    emb: CombinatorialEmbedding, dart_class: Mapping[Dart, int], v
) -> frozenset[int]:
    """Merged-face classes touching vertex v, given a precomputed collapse."""
    incident = emb.rotation[v]
    if not incident:
        return frozenset({0})
    out = set()
    for eid in incident:
        w = emb.host.other_end(eid, v)
        out.add(dart_class[(eid, v, w)])
        out.add(dart_class[(eid, w, v)])
    return frozenset(out)


def hface_of_vertex(
    emb: CombinatorialEmbedding, keep: Iterable[int], v
) -> set[Face]:
    """Faces of the restricted drawing that contain vertex v.

    If v keeps at least one incident edge these are the restricted faces it
    lies on; if every incident edge is deleted, the single face that absorbs
    the host faces around v. With no kept edges anywhere, the whole plane
    sentinel is returned.
    """
    if v not in emb.host.vertices:
        raise GraphError(f"vertex {v!r} not in host")
    keep = set(keep)
    restricted = restrict_embedding(emb, keep)
    if not restricted.host.num_edges():
        return {WHOLE_PLANE}
    dart_class, members = merged_face_classes(emb, keep)
    classes_of_v = set()
    for eid in emb.rotation[v]:
        w = emb.host.other_end(eid, v)
        classes_of_v.add(dart_class[(eid, v, w)])
        classes_of_v.add(dart_class[(eid, w, v)])
    result = set()
    for face in restricted.faces():
        d = face.boundary[0]
        if dart_class[d] in classes_of_v:
            result.add(face)
    return result


def all_rotation_systems(g: Graph) -> Iterator[CombinatorialEmbedding]:
    """Every rotation system of g (cyclic orders fixed up to rotation).

    The first incident edge of each vertex is pinned, so each cyclic order
    is produced exactly once. Exponential; intended for small hosts.
    """
    from itertools import permutations, product

    verts = g.sorted_vertices()
    choices = []
    for v in verts:
        inc = g.incident_edges(v)
        if len(inc) <= 2:
            choices.append([tuple(inc)])
        else:
            head, rest = inc[0], inc[1:]
            choices.append([(head, *perm) for perm in permutations(rest)])
    for combo in product(*choices):
        yield CombinatorialEmbedding(g, dict(zip(verts, combo)))
