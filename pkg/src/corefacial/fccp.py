"""Decide core-facial constrained planarity for biconnected graphs.

The solver walks the decomposition tree bottom-up. For every tree node it
keeps a compact description of which embeddings of the node's pertinent
graph can still satisfy the constraints:

* A node is *non-traversable* when a cycle of core edges runs through both
  of its poles with at least one edge inside the pertinent graph and one
  outside. Such a cycle splits the outer region of the node's core drawing
  into two faces, so vertices that must stay visible from outside fall into
  *bags*: each bag has two *pockets* that must land on opposite sides,
  while the *special* bag holds vertices that touch both sides in every
  embedding. A traversable node keeps only its special bag.

* Constraint pairs that become internal to a node are consumed there by
  ``merge_bags``: endpoints in the special bag or in the same pocket are
  free, endpoints in opposite pockets of one bag are impossible, endpoints
  in different bags weld the two bags together.

* Rigid (R) and parallel (P) nodes fix the embedding of their skeleton
  restricted to the core-connected children (the *core skeleton*) and
  associate the children's pockets with its faces: forced choices first,
  then propagation between linked pockets, then a deterministic fill-in.
  Any contradiction makes the instance negative. Pockets whose virtual
  edge touches both faces around the reference edge may stay unassociated;
  their bags ride upward unchanged and are only welded together by pairs.

Pairs whose endpoints are joined by a core edge are discharged up front
(the edge's endpoints always share its two faces). A non-planar input is
negative outright; a non-biconnected input is outside the method's scope
and rejected with a distinct error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import (
    CombinatorialEmbedding,
    Graph,
    GraphError,
    id_sort_key,
    is_biconnected,
    merged_face_classes,
    vertex_face_classes,
)
from .instances import FccpInstance, normalize_pair
from .planarity import planar_embedding
from .spqr import REAL, NotBiconnectedError, SpqrTree, build_spqr, r_skeleton_embedding


class _NegativeType:
    """Sentinel verdict for an unsatisfiable constraint; a value, not an error."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEGATIVE"

    def __bool__(self) -> bool:
        return False


NEGATIVE = _NegativeType()


# ---------------------------------------------------------------------------
# Traversability
# ---------------------------------------------------------------------------


@dataclass
class Traversability:
    """Per node: does a core-only pole-to-pole path exist inside the
    pertinent graph, and in the rest of the graph?"""

    inside: dict[int, bool]
    outside: dict[int, bool]

    def non_traversable(self, nid: int) -> bool:
        return self.inside[nid] and self.outside[nid]

    def traversable(self, nid: int) -> bool:
        return not self.non_traversable(nid)


def _skeleton_path_exists(skel: Graph, src, dst, usable) -> bool:
    if src == dst:
        return True
    seen = {src}
    stack = [src]
    while stack:
        v = stack.pop()
        for eid in skel.incident_edges(v):
            if not usable(eid):
                continue
            w = skel.other_end(eid, v)
            if w == dst:
                return True
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def compute_traversability(tree: SpqrTree, core: frozenset) -> Traversability:
    """Bottom-up pass for the inside paths, then top-down for the outside:
    a sibling edge stands for a core path through that child, the reference
    edge for a core path through the rest of the graph."""
    inside: dict[int, bool] = {}
    for nid in tree.postorder():
        node = tree.nodes[nid]
        if node.kind == "Q" and nid != tree.root:
            inside[nid] = tree.real_edge_of_q(nid) in core
            continue

        def usable_in(eid, node=node):
            target = node.child_map.get(eid)
            if target is None:
                return False  # the reference edge is not part of pert
            if isinstance(target, tuple) and target[0] == REAL:
                return target[1] in core
            return inside[target]

        u, v = node.poles
        inside[nid] = _skeleton_path_exists(node.skeleton, u, v, usable_in)

    outside: dict[int, bool] = {tree.root: False}
    for nid in reversed(tree.postorder()):
        node = tree.nodes[nid]
        for eid in sorted(node.child_map):
            target = node.child_map[eid]
            if isinstance(target, tuple) and target[0] == REAL:
                continue

            def usable_out(e, node=node, skip=eid):
                if e == skip:
                    return False
                if e == node.ref_edge:
                    return outside[node.node_id]
                t = node.child_map[e]
                if isinstance(t, tuple) and t[0] == REAL:
                    return t[1] in core
                return inside[t]

            cu, cv = node.skeleton.endpoints(eid)
            outside[target] = _skeleton_path_exists(node.skeleton, cu, cv, usable_out)
    return Traversability(inside, outside)


def direct_traversability(tree: SpqrTree, core: frozenset) -> Traversability:
    """Reference semantics: per-node path search over the real edges."""
    g = tree.graph

    def core_path(edge_ids, src, dst) -> bool:
        adj: dict = {}
        for eid in edge_ids:
            if eid not in core:
                continue
            a, b = g.endpoints(eid)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = {src}
        stack = [src]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y == dst:
                    return True
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    inside: dict[int, bool] = {}
    outside: dict[int, bool] = {}
    all_eids = set(g.edge_ids())
    for nid in tree.postorder():
        u, v = tree.nodes[nid].poles
        pert = tree.pertinent_edge_ids(nid)
        inside[nid] = core_path(pert, u, v)
        outside[nid] = core_path(all_eids - pert, u, v)
    return Traversability(inside, outside)


# ---------------------------------------------------------------------------
# Bags
# ---------------------------------------------------------------------------


@dataclass
class Bag:
    """Two pockets of outward-constrained vertices that must land on
    opposite boundary faces."""

    pocket_s: set = field(default_factory=set)
    pocket_t: set = field(default_factory=set)

    def vertices(self) -> set:
        return self.pocket_s | self.pocket_t

    def canonical(self):
        s = tuple(sorted(self.pocket_s, key=id_sort_key))
        t = tuple(sorted(self.pocket_t, key=id_sort_key))
        return min((s, t), (t, s))


class BagSet:
    """The bags of one tree node, with a vertex location index."""

    def __init__(self, owner: int) -> None:
        self.owner = owner
        self.bags: list[Bag | None] = []
        self.special: set = set()
        self._where: dict = {}

    def add_special(self, v) -> None:
        if v in self._where:
            if self._where[v] != "special":
                raise AssertionError(f"{v!r} already sits in an ordinary bag")
            return
        self.special.add(v)
        self._where[v] = "special"

    def add_bag(self, pocket_s, pocket_t) -> int:
        idx = len(self.bags)
        bag = Bag(set(pocket_s), set(pocket_t))
        self.bags.append(bag)
        for v in bag.pocket_s:
            self._register(v, (idx, "s"))
        for v in bag.pocket_t:
            self._register(v, (idx, "t"))
        return idx

    def _register(self, v, where) -> None:
        if v in self._where:
            raise AssertionError(f"{v!r} placed twice in one bag set")
        self._where[v] = where

    def locate(self, v):
        """'special', (bag index, 's'|'t'), or None when absent."""
        return self._where.get(v)

    def live_bags(self) -> list[Bag]:
        return [b for b in self.bags if b is not None and b.vertices()]

    def all_vertices(self) -> set:
        out = set(self.special)
        for b in self.live_bags():
            out |= b.vertices()
        return out

    def canonical(self):
        bags = sorted(b.canonical() for b in self.live_bags())
        return (tuple(sorted(self.special, key=id_sort_key)), tuple(bags))

    def describe(self) -> str:
        parts = []
        if self.special:
            names = ",".join(str(v) for v in sorted(self.special, key=id_sort_key))
            parts.append("special{" + names + "}")
        for b in self.live_bags():
            s = ",".join(str(v) for v in sorted(b.pocket_s, key=id_sort_key))
            t = ",".join(str(v) for v in sorted(b.pocket_t, key=id_sort_key))
            parts.append("bag{" + s + "|" + t + "}")
        return " ".join(parts) if parts else "empty"

    def merge_pair(self, x, y):
        """Constrain x and y to one shared face; True, or NEGATIVE.

        Endpoints absent from every bag were settled by the association
        step (or are poles reaching both sides); nothing to record then.
        """
        px, py = self.locate(x), self.locate(y)
        if px is None or py is None:
            return True
        if px == "special" or py == "special":
            return True
        bx, sx = px
        by, sy = py
        if bx == by:
            return True if sx == sy else NEGATIVE
        big, small = self.bags[bx], self.bags[by]
        # the pockets holding x and y unite; the remaining two unite
        src_s = small.pocket_s if sy == "s" else small.pocket_t
        src_t = small.pocket_t if sy == "s" else small.pocket_s
        dst_same = big.pocket_s if sx == "s" else big.pocket_t
        dst_other = big.pocket_t if sx == "s" else big.pocket_s
        side_same = sx
        side_other = "t" if sx == "s" else "s"
        for v in src_s:
            dst_same.add(v)
            self._where[v] = (bx, side_same)
        for v in src_t:
            dst_other.add(v)
            self._where[v] = (bx, side_other)
        self.bags[by] = None
        return True

    def prune(self, is_live) -> None:
        """Drop vertices without remaining pairs; drop emptied bags."""
        for v in [v for v in self.special if not is_live(v)]:
            self.special.discard(v)
            del self._where[v]
        for idx, bag in enumerate(self.bags):
            if bag is None:
                continue
            for v in [v for v in bag.vertices() if not is_live(v)]:
                bag.pocket_s.discard(v)
                bag.pocket_t.discard(v)
                del self._where[v]
            if not bag.vertices():
                self.bags[idx] = None


def merge_bags(bs: BagSet, pair):
    """Spec-facing wrapper: apply one pair to a bag set in place."""
    x, y = pair
    if bs.merge_pair(x, y) is NEGATIVE:
        return NEGATIVE
    return bs


# ---------------------------------------------------------------------------
# Core skeleton: the fixed face structure of R and P nodes
# ---------------------------------------------------------------------------


@dataclass
class HSkel:
    """Face structure of a skeleton restricted to its core-connected edges.

    ``edge_faces`` lists the two face classes beside each core-skeleton
    edge. ``contained_face`` gives the single class a removed (traversable)
    edge dissolves into; parallel nodes leave it empty and decide placement
    through the grouping plan instead. ``vertex_faces`` are the classes
    each skeleton vertex touches. ``ref_faces`` is set when the node is
    non-traversable; ``outer_candidates`` when it is traversable (rigid
    nodes pin a single candidate, parallel nodes may keep several open
    until the pockets are associated).
    """

    node: int
    core_edges: frozenset
    num_faces: int
    edge_faces: dict
    contained_face: dict
    vertex_faces: dict
    ref_faces: tuple | None
    outer_candidates: frozenset | None


def build_h_skel(
    tree: SpqrTree,
    nid: int,
    trav: Traversability,
    embedding: CombinatorialEmbedding | None = None,
    parallel_order: list | None = None,
) -> HSkel:
    """Build the core-skeleton face structure of an R or P node."""
    node = tree.nodes[nid]
    if node.kind == "R":
        if embedding is None:
            embedding = r_skeleton_embedding(tree, nid)
            if embedding is None:
                raise GraphError("rigid skeleton is not planar")
        return _h_skel_rigid(tree, nid, trav, embedding)
    if node.kind == "P":
        if parallel_order is None:
            raise GraphError("a parallel node needs its fixed edge order")
        return _h_skel_parallel(tree, nid, trav, parallel_order)
    raise GraphError("core skeletons exist only for R and P nodes")


def _core_skeleton_edges(tree: SpqrTree, nid: int, trav: Traversability) -> frozenset:
    node = tree.nodes[nid]
    out = set()
    for eid, target in node.child_map.items():
        if isinstance(target, tuple) and target[0] == REAL:
            continue
        if trav.non_traversable(target):
            out.add(eid)
    if node.ref_edge is not None and trav.non_traversable(nid):
        out.add(node.ref_edge)
    return frozenset(out)


def _h_skel_rigid(tree, nid, trav, emb: CombinatorialEmbedding) -> HSkel:
    node = tree.nodes[nid]
    skel = node.skeleton
    core_edges = _core_skeleton_edges(tree, nid, trav)
    dart_class, members = merged_face_classes(emb, core_edges)
    edge_faces: dict = {}
    contained: dict = {}
    for eid in skel.edge_ids():
        u, v = skel.endpoints(eid)
        c1 = dart_class[(eid, u, v)]
        c2 = dart_class[(eid, v, u)]
        if eid in core_edges:
            if c1 == c2:
                raise AssertionError("core-skeleton edge with one side")
            edge_faces[eid] = frozenset((c1, c2))
        else:
            if c1 != c2:
                raise AssertionError("removed edge must dissolve into one face")
            contained[eid] = c1
    vertex_faces = {v: vertex_face_classes(emb, dart_class, v) for v in skel.vertices}
    ref_faces = None
    outer = None
    if trav.non_traversable(nid):
        fl, fr = sorted(edge_faces[node.ref_edge])
        ref_faces = (fl, fr)
    else:
        outer = frozenset({contained[node.ref_edge]})
    return HSkel(
        node=nid,
        core_edges=core_edges,
        num_faces=len(members),
        edge_faces=edge_faces,
        contained_face=contained,
        vertex_faces=vertex_faces,
        ref_faces=ref_faces,
        outer_candidates=outer,
    )


def _h_skel_parallel(tree, nid, trav, order: list) -> HSkel:
    """Lens faces of a parallel bundle: lens i lies between the bundle
    edges order[i] and order[i + 1] of the fixed cyclic order."""
    node = tree.nodes[nid]
    m = len(order)
    if m < 2:
        raise AssertionError("a parallel core skeleton needs two edges")
    edge_faces = {eid: frozenset(((i - 1) % m, i)) for i, eid in enumerate(order)}
    all_faces = frozenset(range(m))
    u, v = node.poles
    ref_faces = None
    if trav.non_traversable(nid):
        i = order.index(node.ref_edge)
        fl, fr = sorted(((i - 1) % m, i))
        ref_faces = (fl, fr)
    return HSkel(
        node=nid,
        core_edges=frozenset(order),
        num_faces=m,
        edge_faces=edge_faces,
        contained_face={},
        vertex_faces={u: all_faces, v: all_faces},
        ref_faces=ref_faces,
        outer_candidates=None,  # resolved by the parallel-node processor
    )


# ---------------------------------------------------------------------------
# Solver context
# ---------------------------------------------------------------------------


class FccpSolver:
    """Reusable solver over one biconnected graph.

    The decomposition, the rigid-skeleton embeddings and their face
    structures depend only on the graph, so a harness sweeping many edge
    classifications and pair sets of one graph can share this object;
    ``solve`` is stateless across calls.
    """

    def __init__(self, graph: Graph) -> None:
        if not is_biconnected(graph):
            raise NotBiconnectedError("solver requires a biconnected graph")
        self.graph = graph
        self.planar = True
        self.tree: SpqrTree | None = None
        if graph.num_vertices() >= 3:
            self.planar = planar_embedding(graph) is not None
            if self.planar:
                self.tree = build_spqr(graph)
        self._trav_cache: dict[frozenset, Traversability] = {}
        self._hskel_cache: dict = {}
        self._r_emb_cache: dict[int, CombinatorialEmbedding] = {}

    def traversability(self, core: frozenset) -> Traversability:
        t = self._trav_cache.get(core)
        if t is None:
            t = compute_traversability(self.tree, core)
            self._trav_cache[core] = t
        return t

    def _r_embedding(self, nid: int) -> CombinatorialEmbedding:
        emb = self._r_emb_cache.get(nid)
        if emb is None:
            emb = r_skeleton_embedding(self.tree, nid)
            if emb is None:
                raise AssertionError("planar graph with a non-planar rigid skeleton")
            self._r_emb_cache[nid] = emb
        return emb

    def rigid_h_skel(self, nid: int, trav: Traversability) -> HSkel:
        key = (nid, _core_skeleton_edges(self.tree, nid, trav))
        hs = self._hskel_cache.get(key)
        if hs is None:
            hs = _h_skel_rigid(self.tree, nid, trav, self._r_embedding(nid))
            self._hskel_cache[key] = hs
        return hs

    def solve(self, core, pairs, trace=None, validate: bool = False) -> bool:
        core = frozenset(core)
        if self.graph.num_vertices() <= 2:
            return True
        if not self.planar:
            return False
        live = _discharge(self.graph, core, pairs)
        if not live:
            return True
        return _RunState(self, core, live, trace, validate).run()


def _discharge(graph: Graph, core, pairs) -> set:
    """Normalize the pair set and drop pairs joined by a core edge."""
    core_pairs = {frozenset(graph.endpoints(eid)) for eid in core}
    out = set()
    for x, y in pairs:
        p = normalize_pair(x, y)
        if frozenset(p) not in core_pairs:
            out.add(p)
    return out


class _RunState:
    """One bottom-up pass: live pairs, bag sets, verdict."""

    def __init__(self, solver: FccpSolver, core, live_pairs, trace, validate):
        self.solver = solver
        self.tree: SpqrTree = solver.tree
        self.core = core
        self.live: set = set(live_pairs)
        self.by_vertex: dict = {}
        for p in self.live:
            for v in p:
                self.by_vertex.setdefault(v, set()).add(p)
        self.trav = solver.traversability(core)
        self.bagsets: dict[int, BagSet] = {}
        self.trace = trace
        self.validate = validate

    def is_live_vertex(self, v) -> bool:
        return bool(self.by_vertex.get(v))

    def consume(self, pair) -> None:
        if pair in self.live:
            self.live.discard(pair)
            for v in pair:
                self.by_vertex[v].discard(pair)

    def pairs_touching(self, verts) -> list:
        out = set()
        for v in verts:
            out |= self.by_vertex.get(v, set())
        return sorted(out)

    def internal_pairs(self, nid: int) -> list:
        pv = self.tree.pertinent_vertices(nid)
        return [p for p in self.pairs_touching(pv) if p[0] in pv and p[1] in pv]

    def run(self) -> bool:
        for nid in self.tree.postorder():
            node = self.tree.nodes[nid]
            if nid == self.tree.root:
                if self.validate:
                    assert not self.live, "pairs must be consumed below the root"
                continue
            if node.kind == "Q":
                bs = process_q_node(self, nid)
            elif node.kind == "S":
                bs = process_s_node(self, nid)
            elif node.kind == "R":
                bs = process_r_node(self, nid)
            else:
                bs = process_p_node(self, nid)
            if bs is NEGATIVE:
                self._emit(nid, None)
                return False
            self.bagsets[nid] = bs
            self._emit(nid, bs)
            if self.validate:
                self._check_partition(nid, bs)
        return True

    def _emit(self, nid: int, bs: BagSet | None) -> None:
        if self.trace is None:
            return
        node = self.tree.nodes[nid]
        t = "no" if self.trav.non_traversable(nid) else "yes"
        desc = "NEGATIVE" if bs is None else bs.describe()
        self.trace.append(
            f"node={nid} kind={node.kind} poles={node.poles[0]}-{node.poles[1]} "
            f"traversable={t} bags: {desc}"
        )

    def _check_partition(self, nid: int, bs: BagSet) -> None:
        pv = self.tree.pertinent_vertices(nid)
        expected = set()
        for p in self.pairs_touching(pv):
            ins = [v for v in p if v in pv]
            if len(ins) == 1:
                expected.add(ins[0])
        got = bs.all_vertices()
        assert got == expected, (
            f"bag partition broken at node {nid}: "
            f"{sorted(map(str, got))} vs outward {sorted(map(str, expected))}"
        )
        if self.trav.traversable(nid):
            assert not bs.live_bags(), "traversable node keeps only the special bag"


# ---------------------------------------------------------------------------
# Q and S nodes
# ---------------------------------------------------------------------------


def process_q_node(state: _RunState, nid: int) -> BagSet:
    """Poles with an outward partner go to the special bag, nothing else."""
    bs = BagSet(nid)
    u, v = state.tree.nodes[nid].poles
    for pole, other in ((u, v), (v, u)):
        for p in state.by_vertex.get(pole, ()):
            partner = p[0] if p[1] == pole else p[1]
            if partner != other:
                bs.add_special(pole)
                break
    return bs


def process_s_node(state: _RunState, nid: int):
    """Union the children's special bags; inherit their ordinary bags when
    the node is non-traversable; consume the newly internal pairs."""
    node = state.tree.nodes[nid]
    bs = BagSet(nid)
    children = node.children()
    for c in children:
        for v in sorted(state.bagsets[c].special, key=id_sort_key):
            if state.is_live_vertex(v):
                bs.add_special(v)
    if state.trav.non_traversable(nid):
        for c in children:
            for bag in state.bagsets[c].live_bags():
                s = {v for v in bag.pocket_s if state.is_live_vertex(v)}
                t = {v for v in bag.pocket_t if state.is_live_vertex(v)}
                if s or t:
                    bs.add_bag(s, t)
    elif state.validate:
        assert all(not state.bagsets[c].live_bags() for c in children)
    for pair in state.internal_pairs(nid):
        if bs.merge_pair(*pair) is NEGATIVE:
            return NEGATIVE
        state.consume(pair)
    bs.prune(state.is_live_vertex)
    return bs


# ---------------------------------------------------------------------------
# R nodes
# ---------------------------------------------------------------------------


def process_r_node(state: _RunState, nid: int):
    hskel = state.solver.rigid_h_skel(nid, state.trav)
    node = state.tree.nodes[nid]
    plan: dict = {}
    for eid, target in node.child_map.items():
        if isinstance(target, tuple) and target[0] == REAL:
            continue
        if state.trav.traversable(target):
            plan[target] = ("face", hskel.contained_face[eid])
    return _process_facial_node(state, nid, hskel, plan)


# ---------------------------------------------------------------------------
# P nodes
# ---------------------------------------------------------------------------


def process_p_node(state: _RunState, nid: int):
    node = state.tree.nodes[nid]
    children = node.children()
    blacks = [c for c in children if state.trav.non_traversable(c)]
    whites = [c for c in children if state.trav.traversable(c)]
    if not blacks:
        return _p_all_traversable(state, nid, children)
    if len(blacks) == 1:
        return _p_single_black(state, nid, blacks[0], whites)
    return _p_many_blacks(state, nid, blacks, whites)


def _p_all_traversable(state: _RunState, nid: int, children):
    bs = BagSet(nid)
    for c in children:
        for v in sorted(state.bagsets[c].special, key=id_sort_key):
            if state.is_live_vertex(v):
                bs.add_special(v)
        if state.validate:
            assert not state.bagsets[c].live_bags()
    for pair in state.internal_pairs(nid):
        if bs.merge_pair(*pair) is NEGATIVE:
            return NEGATIVE
        state.consume(pair)
    bs.prune(state.is_live_vertex)
    return bs


def _p_single_black(state: _RunState, nid: int, black: int, whites):
    """One core-connected child: inherit its bags; every traversable
    sibling becomes a fresh one-pocket bag (its vertices must end up on a
    single side of the splitting cycle)."""
    node = state.tree.nodes[nid]
    poles = set(node.poles)
    bs = BagSet(nid)
    inherited = state.bagsets[black]
    for v in sorted(inherited.special, key=id_sort_key):
        if state.is_live_vertex(v):
            bs.add_special(v)
    for bag in inherited.live_bags():
        s = {v for v in bag.pocket_s if state.is_live_vertex(v)}
        t = {v for v in bag.pocket_t if state.is_live_vertex(v)}
        if s or t:
            bs.add_bag(s, t)
    for c in whites:
        live = {
            v for v in state.bagsets[c].special if state.is_live_vertex(v)
        }
        for v in sorted(live & poles, key=id_sort_key):
            bs.add_special(v)
        rest = live - poles - bs.special
        if rest:
            bs.add_bag(rest, set())
    for pair in state.internal_pairs(nid):
        if bs.merge_pair(*pair) is NEGATIVE:
            return NEGATIVE
        state.consume(pair)
    bs.prune(state.is_live_vertex)
    return bs


def _p_many_blacks(state: _RunState, nid: int, blacks, whites):
    """Two or more core-connected children: their cyclic order is dictated
    by the pair-link graph, which must reduce to a spanning cycle or a
    disjoint union of paths over the core-connected children."""
    tree = state.tree
    node = tree.nodes[nid]
    poles = set(node.poles)
    ref_token = "ref"
    mu_non_trav = state.trav.non_traversable(nid)
    pv = tree.pertinent_vertices(nid)

    owner: dict = {}
    for c in node.children():
        for v in tree.pertinent_vertices(c) - poles:
            owner[v] = c

    # link graph over children plus the outside token
    aux_edges: set[frozenset] = set()
    for pair in state.pairs_touching(pv):
        tokens = []
        skip = False
        for v in pair:
            if v in poles:
                skip = True
                break
            if v in owner:
                tokens.append(owner[v])
            elif v in pv:
                raise AssertionError("pertinent vertex outside every child")
            else:
                tokens.append(ref_token)
        if skip:
            continue
        a, b = tokens
        if a == b:
            if a == ref_token:
                continue
            raise AssertionError("pair internal to one child is still live")
        aux_edges.add(frozenset((a, b)))

    white_tokens = set(whites)
    if not mu_non_trav:
        white_tokens.add(ref_token)
    black_tokens = set(blacks) | ({ref_token} if mu_non_trav else set())

    # contract adjacent whites
    parent = {w: w for w in white_tokens}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for e in sorted(aux_edges, key=lambda e: sorted(map(id_sort_key, e))):
        a, b = sorted(e, key=id_sort_key)
        if a in white_tokens and b in white_tokens:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

    groups: dict = {}
    for w in sorted(white_tokens, key=id_sort_key):
        groups.setdefault(find(w), set()).add(w)
    group_blacks: dict = {g: set() for g in groups}
    bar_edges: set[frozenset] = set()
    for e in aux_edges:
        a, b = tuple(e)
        wa, wb = a in white_tokens, b in white_tokens
        if wa and wb:
            continue
        if not wa and not wb:
            bar_edges.add(e)
        else:
            w, blk = (a, b) if wa else (b, a)
            group_blacks[find(w)].add(blk)

    for g in sorted(groups, key=id_sort_key):
        nbrs = group_blacks[g]
        if len(nbrs) > 2:
            return NEGATIVE
        if len(nbrs) == 2:
            bar_edges.add(frozenset(nbrs))

    order = _black_order(black_tokens, bar_edges)
    if order is NEGATIVE:
        return NEGATIVE

    edge_of_child = {}
    for eid, target in node.child_map.items():
        if not (isinstance(target, tuple) and target[0] == REAL):
            edge_of_child[target] = eid
    core_order = [
        node.ref_edge if tok == ref_token else edge_of_child[tok] for tok in order
    ]
    hskel = _h_skel_parallel(tree, nid, state.trav, core_order)

    pos = {tok: i for i, tok in enumerate(order)}
    m = len(order)

    def lens_between(b1, b2) -> int:
        i1, i2 = pos[b1], pos[b2]
        if (i1 + 1) % m == i2:
            return i1
        if (i2 + 1) % m == i1:
            return i2
        raise AssertionError("linked blacks must be adjacent in the order")

    plan: dict = {}
    outer_candidates = None
    for g, members in sorted(groups.items(), key=lambda kv: id_sort_key(kv[0])):
        child_members = tuple(
            sorted((c for c in members if c != ref_token))
        )
        nbrs = sorted(group_blacks[g], key=id_sort_key)
        if ref_token in members:
            # the outside rides with this group: its children embed in the
            # outer face, wherever the resolution puts it
            if len(nbrs) == 2:
                outer_candidates = frozenset({lens_between(*nbrs)})
            elif len(nbrs) == 1:
                i = pos[nbrs[0]]
                outer_candidates = frozenset({(i - 1) % m, i})
            else:
                outer_candidates = frozenset(range(m))
            for c in child_members:
                plan[c] = ("outer",)
        elif len(nbrs) == 2:
            f = lens_between(*nbrs)
            for c in child_members:
                plan[c] = ("face", f)
        elif len(nbrs) == 1:
            if nbrs[0] == ref_token:
                for c in child_members:
                    plan[c] = ("ref_deferred", child_members)
            else:
                for c in child_members:
                    plan[c] = ("ride", nbrs[0], child_members)
        else:
            for c in child_members:
                plan[c] = ("free",)

    if not mu_non_trav:
        if outer_candidates is None:
            outer_candidates = frozenset(range(m))
        hskel.outer_candidates = outer_candidates

    return _process_facial_node(state, nid, hskel, plan)


def _black_order(black_tokens: set, bar_edges: set):
    """Cyclic order realizing the link graph, or NEGATIVE.

    The link graph must be a single cycle through every vertex or a
    disjoint union of paths (possibly single vertices); linked vertices
    stay adjacent in the returned order."""
    adj: dict = {b: set() for b in black_tokens}
    for e in bar_edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    if any(len(ns) > 2 for ns in adj.values()):
        return NEGATIVE
    n = len(black_tokens)
    if bar_edges and all(len(ns) == 2 for ns in adj.values()):
        # must be one cycle through everything
        start = min(black_tokens, key=id_sort_key)
        order = [start]
        seen = {start}
        prev, cur = None, start
        while True:
            options = sorted((x for x in adj[cur] if x != prev), key=id_sort_key)
            if not options:
                return NEGATIVE
            prev, cur = cur, options[0]
            if cur == start:
                break
            if cur in seen:
                return NEGATIVE
            seen.add(cur)
            order.append(cur)
        return order if len(order) == n else NEGATIVE
    # otherwise: disjoint paths, no cycles at all
    paths = []
    seen = set()
    for b in sorted(black_tokens, key=id_sort_key):
        if b in seen or len(adj[b]) == 2:
            continue
        path = [b]
        seen.add(b)
        prev, cur = None, b
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            if cur in seen:
                return NEGATIVE
            seen.add(cur)
            path.append(cur)
        if id_sort_key(path[-1]) < id_sort_key(path[0]):
            path.reverse()
        paths.append(path)
    if len(seen) != n:
        return NEGATIVE  # leftover degree-2 vertices form a stray cycle
    paths.sort(key=lambda p: id_sort_key(p[0]))
    return [b for path in paths for b in path]


# ---------------------------------------------------------------------------
# Pocket association engine, shared by R and P nodes
# ---------------------------------------------------------------------------


class _Unit:
    """An orientable bag riding one core-skeleton edge.

    ``faces`` are the two candidate face classes; ``assigned`` fixes which
    face each pocket takes. Pinned units (both candidate faces flank the
    reference edge, or placement hinges on the outside) are never assigned
    arbitrarily: left open, they ride upward as bags of this node.
    """

    __slots__ = ("pocket_s", "pocket_t", "faces", "assigned", "pinned", "key")

    def __init__(self, pocket_s, pocket_t, faces, pinned, key):
        self.pocket_s = set(pocket_s)
        self.pocket_t = set(pocket_t)
        self.faces = tuple(faces)
        self.assigned = None
        self.pinned = pinned
        self.key = key

    def face_of(self, side: str):
        if self.assigned is None:
            return None
        return self.assigned[0] if side == "s" else self.assigned[1]


_OUTER = "outer-face"


def _process_facial_node(state: _RunState, nid: int, hskel: HSkel, plan: dict):
    tree = state.tree
    node = tree.nodes[nid]
    poles = set(node.poles)
    pv = tree.pertinent_vertices(nid)
    mu_non_trav = state.trav.non_traversable(nid)
    ref_pair = frozenset(hskel.ref_faces) if hskel.ref_faces else None
    all_faces = frozenset(range(hskel.num_faces))
    outer_candidates = hskel.outer_candidates

    # ---- placements ----
    fixed: dict = {}
    unit_of: dict = {}
    units: list[_Unit] = []

    def add_unit(ps, pt, faces, pinned, key) -> None:
        ps = {v for v in ps if state.is_live_vertex(v)}
        pt = {v for v in pt if state.is_live_vertex(v)}
        if not (ps or pt):
            return
        unit = _Unit(ps, pt, faces, pinned, key)
        units.append(unit)
        for v in ps:
            unit_of[v] = (unit, "s")
        for v in pt:
            unit_of[v] = (unit, "t")

    for v in sorted(node.skeleton.vertices, key=id_sort_key):
        if state.is_live_vertex(v):
            fixed[v] = hskel.vertex_faces[v]

    edge_of_child = {}
    for eid, target in node.child_map.items():
        if not (isinstance(target, tuple) and target[0] == REAL):
            edge_of_child[target] = eid

    handled_groups = set()
    outer_members: set = set()
    for c in sorted(node.children()):
        cbs = state.bagsets[c]
        if state.trav.non_traversable(c):
            faces = tuple(sorted(hskel.edge_faces[edge_of_child[c]]))
            pinned = ref_pair is not None and frozenset(faces) == ref_pair
            for v in sorted(cbs.special, key=id_sort_key):
                if state.is_live_vertex(v) and v not in fixed:
                    fixed[v] = frozenset(faces)
            for bag in cbs.live_bags():
                add_unit(
                    bag.pocket_s,
                    bag.pocket_t,
                    faces,
                    pinned,
                    ("bag", c, bag.canonical()),
                )
            continue
        members = {
            v for v in cbs.special if state.is_live_vertex(v) and v not in poles
        }
        if state.validate:
            assert not cbs.live_bags(), "traversable child carries only specials"
        decision = plan.get(c, ("free",))
        kind = decision[0]
        if kind == "face":
            for v in members:
                fixed.setdefault(v, frozenset({decision[1]}))
        elif kind == "outer":
            outer_members |= members
        elif kind == "free":
            for v in members:
                fixed.setdefault(v, all_faces)
        else:  # ride a core child, or wait for the outside
            group = decision[-1]
            if group in handled_groups:
                continue
            handled_groups.add(group)
            group_members = set()
            for gc in group:
                group_members |= {
                    v
                    for v in state.bagsets[gc].special
                    if state.is_live_vertex(v) and v not in poles
                }
            if kind == "ride":
                blk = decision[1]
                faces = tuple(sorted(hskel.edge_faces[edge_of_child[blk]]))
                pinned = ref_pair is not None and frozenset(faces) == ref_pair
                add_unit(group_members, (), faces, pinned, ("ride", group))
            else:  # ref_deferred
                add_unit(group_members, (), tuple(sorted(ref_pair)), True, ("refdef", group))

    # The outer face of a traversable node may still be ambiguous between
    # the two lens faces of a parallel bundle; the outside then behaves
    # like one more orientable unit, so that outward-visibility demands
    # force and propagate exactly like any other same-face constraint.
    # Children that ride along with the outside join its pocket.
    outside_unit: _Unit | None = None
    outer_face = None
    if not mu_non_trav:
        cands = sorted(outer_candidates)
        if len(cands) == 1:
            outer_face = cands[0]
            for v in outer_members:
                fixed.setdefault(v, frozenset({_OUTER}))
        elif len(cands) == 2:
            outside_unit = _Unit(outer_members, (), tuple(cands), False, ("outside",))
            units.append(outside_unit)
            for v in outer_members:
                unit_of[v] = (outside_unit, "s")
        else:
            # more than two lens candidates: the outside has no link to any
            # core child, so nothing can be pinned to the outer face except
            # the children riding with it
            for v in outer_members:
                fixed.setdefault(v, frozenset({_OUTER}))

    # ---- association: forced choices, propagation, then fill-in ----
    def outer_options():
        if outer_face is not None:
            return frozenset({outer_face}), None
        if outside_unit is not None:
            f = outside_unit.face_of("s")
            if f is not None:
                return frozenset({f}), None
            return frozenset(outside_unit.faces), (outside_unit, "s")
        return frozenset(outer_candidates), None

    def options(v):
        """Candidate face classes of v now, and its unit when still open."""
        if v not in pv:
            if mu_non_trav:
                return frozenset(ref_pair), None
            return outer_options()
        if v in fixed:
            fs = fixed[v]
            if _OUTER in fs:
                return outer_options()
            return fs, None
        unit, side = unit_of[v]
        f = unit.face_of(side)
        if f is not None:
            return frozenset({f}), None
        return frozenset(unit.faces), (unit, side)

    def assign(unit: _Unit, side: str, face) -> str:
        fa, fb = unit.faces
        if face not in (fa, fb):
            return "conflict"
        other = fb if face == fa else fa
        want = (face, other) if side == "s" else (other, face)
        if unit.assigned is None:
            unit.assigned = want
            return "new"
        return "same" if unit.assigned == want else "conflict"

    relevant = state.pairs_touching(pv)

    def examine(pair) -> str:
        x, y = pair
        fx, ux = options(x)
        fy, uy = options(y)
        shared = fx & fy
        if not shared:
            return "negative"
        progress = False
        if len(shared) == 1:
            (f,) = shared
            for u in (ux, uy):
                if u is None:
                    continue
                res = assign(u[0], u[1], f)
                if res == "conflict":
                    return "negative"
                if res == "new":
                    progress = True
        return "progress" if progress else "ok"

    def fixpoint() -> bool:
        while True:
            changed = False
            for pair in relevant:
                res = examine(pair)
                if res == "negative":
                    return False
                if res == "progress":
                    changed = True
            if not changed:
                return True

    if not fixpoint():
        return NEGATIVE
    for unit in sorted(units, key=lambda u: repr(u.key)):
        if unit.assigned is not None or unit.pinned:
            continue
        assign(unit, "s", min(unit.faces))
        if not fixpoint():
            return NEGATIVE

    # ---- pin down the outer face of a traversable node ----
    if not mu_non_trav:
        if outside_unit is not None:
            outer_face = outside_unit.assigned[0]
        elif outer_face is None:
            outer_face = min(outer_candidates)
        if state.validate:
            for pair in relevant:
                for v, other in ((pair[0], pair[1]), (pair[1], pair[0])):
                    if v not in pv and other in pv and other not in poles:
                        fs, _ = options(other)
                        assert outer_face in fs or _OUTER in (fixed.get(other) or ())

    # ---- assemble ----
    bs = BagSet(nid)
    if mu_non_trav:
        fl, fr = hskel.ref_faces
        s_mu: set = set()
        t_mu: set = set()
        placed: set = set()

        def place(v, faces) -> None:
            if v in placed:
                return
            placed.add(v)
            if fl in faces and fr in faces:
                bs.add_special(v)
            elif fl in faces:
                s_mu.add(v)
            elif fr in faces:
                t_mu.add(v)
            # faces away from the boundary: settled inside, drops out

        for v in sorted(fixed, key=id_sort_key):
            place(v, fixed[v])
        carried = []
        for unit in units:
            if unit.assigned is None:
                carried.append(unit)
                continue
            fs, ft = unit.assigned
            for v in sorted(unit.pocket_s, key=id_sort_key):
                place(v, {fs})
            for v in sorted(unit.pocket_t, key=id_sort_key):
                place(v, {ft})
        if s_mu or t_mu:
            bs.add_bag(s_mu, t_mu)
        for unit in carried:
            bs.add_bag(unit.pocket_s, unit.pocket_t)
        carried_verts = set().union(
            *(u.pocket_s | u.pocket_t for u in carried)
        ) if carried else set()
    else:
        for v in sorted(fixed, key=id_sort_key):
            fs = fixed[v]
            if _OUTER in fs or outer_face in fs:
                bs.add_special(v)
        for unit in units:
            if unit.assigned is None:
                if state.validate:
                    raise AssertionError("traversable node left a bag open")
                continue
            fs, ft = unit.assigned
            pocket = unit.pocket_s if fs == outer_face else (
                unit.pocket_t if ft == outer_face else ()
            )
            for v in sorted(pocket, key=id_sort_key):
                bs.add_special(v)
        carried_verts = set()

    # Internal pairs between settled placements were verified exactly by the
    # association step (a shared interior face satisfies them even when the
    # boundary faces separate the endpoints); only pairs that still involve
    # an unassociated bag constrain relative flips and must be merged.
    for pair in state.internal_pairs(nid):
        if pair[0] in carried_verts or pair[1] in carried_verts:
            if bs.merge_pair(*pair) is NEGATIVE:
                return NEGATIVE
        state.consume(pair)
    bs.prune(state.is_live_vertex)
    return bs


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------


def solve_fccp(inst: FccpInstance, trace=None, validate: bool = False) -> bool:
    """Decide whether some planar embedding satisfies every pair.

    Non-biconnected graphs raise ``NotBiconnectedError`` (the method needs
    the decomposition); non-planar graphs are negative outright.
    """
    solver = FccpSolver(inst.graph)
    return solver.solve(inst.core, inst.pairs, trace=trace, validate=validate)
