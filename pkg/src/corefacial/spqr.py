"""Decomposition of a biconnected graph into triconnected components.

The decomposition repeatedly splits the graph at split pairs (two vertices
whose removal separates the edge set, or endpoints of parallel edges) into
pieces joined by paired virtual edges, then merges adjacent bonds with bonds
and cycles with cycles. The result is unique: a tree of components whose
skeletons are cycles (S), parallel bundles (P) and triconnected simple
graphs (R). Every real edge is wrapped in its own two-edge Q node, so the
leaves are exactly the Q nodes; one Q node is picked as the root.

Construction is quadratic-ish (split pairs are found by scanning for
articulation vertices after deleting each candidate vertex), which is fine
for the overall time budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import (
    CombinatorialEmbedding,
    Graph,
    GraphError,
    id_sort_key,
    is_biconnected,
)
from .planarity import planar_embedding


class NotBiconnectedError(GraphError):
    """The decomposition needs a biconnected input graph."""


REAL = "real"


@dataclass
class SpqrNode:
    """One node of the rooted decomposition tree.

    ``child_map`` sends every non-reference skeleton edge either to a child
    node id or, inside a Q node, to ``(REAL, original edge id)``.
    """

    node_id: int
    kind: str  # 'S' | 'P' | 'Q' | 'R'
    skeleton: Graph
    poles: tuple
    ref_edge: int | None
    child_map: dict = field(default_factory=dict)
    parent: int | None = None

    def children(self) -> list[int]:
        return sorted(t for t in self.child_map.values() if not _is_real(t))

    def real_edges(self) -> list[int]:
        return sorted(t[1] for t in self.child_map.values() if _is_real(t))


def _is_real(target) -> bool:
    return isinstance(target, tuple) and len(target) == 2 and target[0] == REAL


# ---------------------------------------------------------------------------
# Split phase helpers (plain dict multigraphs: eid -> (u, v))
# ---------------------------------------------------------------------------


def _adjacency(edges: dict) -> dict:
    adj: dict = {}
    for eid, (u, v) in edges.items():
        adj.setdefault(u, []).append(eid)
        adj.setdefault(v, []).append(eid)
    return adj


def _components_avoiding(edges: dict, adj: dict, banned: set) -> list[set]:
    verts = set(adj) - banned
    seen: set = set()
    comps = []
    for start in sorted(verts, key=id_sort_key):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for eid in adj[v]:
                u, w = edges[eid]
                o = w if v == u else u
                if o in banned or o in seen:
                    continue
                seen.add(o)
                comp.add(o)
                stack.append(o)
        comps.append(comp)
    return comps


def _separation_classes(edges: dict, adj: dict, a, b) -> list[list[int]]:
    """Edge classes of the pair {a, b}: direct edges are singletons, the
    rest groups by connected component after removing both vertices."""
    classes: list[list[int]] = []
    direct = [eid for eid, (u, v) in edges.items() if {u, v} == {a, b}]
    for eid in sorted(direct):
        classes.append([eid])
    comps = _components_avoiding(edges, adj, {a, b})
    for comp in comps:
        cls = sorted(
            eid
            for eid, (u, v) in edges.items()
            if u in comp or v in comp
        )
        if cls:
            classes.append(cls)
    return classes


def _grouping(classes: list[list[int]]) -> tuple[list[int], list[int]] | None:
    """Partition the classes into two sides with at least two edges each."""
    total = sum(len(c) for c in classes)
    order = sorted(classes, key=lambda c: (-len(c), c))
    for i in range(1, len(order)):
        side1 = [e for c in order[:i] for e in c]
        if len(side1) >= 2 and total - len(side1) >= 2:
            return side1, [e for c in order[i:] for e in c]
    return None


def _find_valid_split(edges: dict) -> tuple | None:
    """Some split of this piece into two sides sharing a vertex pair."""
    adj = _adjacency(edges)
    # parallel edges give immediate split pairs
    by_pair: dict[frozenset, list[int]] = {}
    for eid, (u, v) in edges.items():
        by_pair.setdefault(frozenset((u, v)), []).append(eid)
    candidates: list[tuple] = []
    for pair, eids in sorted(by_pair.items(), key=lambda kv: sorted(map(id_sort_key, kv[0]))):
        if len(eids) >= 2:
            candidates.append(tuple(sorted(pair, key=id_sort_key)))
    for a in sorted(adj, key=id_sort_key):
        sub_edges = {
            eid: uv for eid, uv in edges.items() if a not in uv
        }
        if not sub_edges:
            continue
        for b in sorted(_articulations_of(sub_edges), key=id_sort_key):
            candidates.append((a, b))
    seen_pairs = set()
    for a, b in candidates:
        key = frozenset((a, b))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        classes = _separation_classes(edges, adj, a, b)
        if len(classes) < 2:
            continue
        grouped = _grouping(classes)
        if grouped is not None:
            return a, b, grouped[0], grouped[1]
    return None


def _articulations_of(edges: dict) -> set:
    adj = _adjacency(edges)
    index: dict = {}
    low: dict = {}
    parent_edge: dict = {}
    arts: set = set()
    counter = 0
    for root in sorted(adj, key=id_sort_key):
        if root in index:
            continue
        root_children = 0
        index[root] = low[root] = counter
        counter += 1
        parent_edge[root] = None
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for eid in it:
                u, w = edges[eid]
                o = w if v == u else u
                if o not in index:
                    index[o] = low[o] = counter
                    counter += 1
                    parent_edge[o] = eid
                    if v == root:
                        root_children += 1
                    stack.append((o, iter(adj[o])))
                    advanced = True
                    break
                elif eid != parent_edge[v]:
                    low[v] = min(low[v], index[o])
            if not advanced:
                stack.pop()
                if stack:
                    u2 = stack[-1][0]
                    low[u2] = min(low[u2], low[v])
                    if u2 != root and low[v] >= index[u2]:
                        arts.add(u2)
        if root_children > 1:
            arts.add(root)
    return arts


def _classify(edges: dict) -> str:
    pairs = {frozenset(uv) for uv in edges.values()}
    if len(pairs) == 1:
        return "P"  # bond
    adj = _adjacency(edges)
    if all(len(es) == 2 for es in adj.values()) and len(edges) == len(adj):
        return "S"  # cycle
    return "R"


# ---------------------------------------------------------------------------
# The tree
# ---------------------------------------------------------------------------


class SpqrTree:
    """Rooted decomposition tree over a biconnected graph.

    The unrooted structure (component skeletons plus virtual-edge pairings)
    is immutable; rerooting re-derives the orientation only.
    """

    def __init__(self, graph: Graph, cores, links, root_real_eid=None):
        self.graph = graph
        self._cores = cores  # node_id -> (kind, skeleton Graph, {local_eid: (REAL, geid)})
        self._links = links  # local: {(node_id, eid): (other_node, other_eid)}
        self.nodes: dict[int, SpqrNode] = {}
        self.root: int = -1
        self._pert_edges: dict[int, frozenset] = {}
        self._pert_vertices: dict[int, frozenset] = {}
        root_q = self._q_node_of_real(
            root_real_eid
            if root_real_eid is not None
            else min(graph.edge_ids())
        )
        self._orient(root_q)

    # -- construction ------------------------------------------------------

    def _q_node_of_real(self, geid: int) -> int:
        for nid, (kind, _skel, realmap) in self._cores.items():
            if kind == "Q" and any(t == (REAL, geid) for t in realmap.values()):
                return nid
        raise GraphError(f"no Q node for edge {geid}")

    def _orient(self, root_id: int) -> None:
        nodes: dict[int, SpqrNode] = {}
        order: list[int] = []
        stack = [(root_id, None, None)]
        while stack:
            nid, parent, ref_eid = stack.pop()
            kind, skel, realmap = self._cores[nid]
            child_map: dict = dict(realmap)
            for eid in skel.edge_ids():
                if eid == ref_eid or eid in child_map:
                    continue
                other = self._links.get((nid, eid))
                if other is None:
                    raise AssertionError("unpaired virtual edge")
                onid, oeid = other
                child_map[eid] = onid
                stack.append((onid, nid, oeid))
            if ref_eid is not None:
                poles = skel.endpoints(ref_eid)
            else:
                real_eids = [t[1] for t in realmap.values()]
                poles = self.graph.endpoints(real_eids[0])
            nodes[nid] = SpqrNode(
                node_id=nid,
                kind=kind,
                skeleton=skel,
                poles=poles,
                ref_edge=ref_eid,
                child_map=child_map,
                parent=parent,
            )
            order.append(nid)
        self.nodes = nodes
        self.root = root_id
        self._postorder = list(reversed(order))
        self._compute_pertinent()

    def _compute_pertinent(self) -> None:
        pe: dict[int, frozenset] = {}
        for nid in self._postorder:
            node = self.nodes[nid]
            acc: set[int] = set()
            for target in node.child_map.values():
                if _is_real(target):
                    acc.add(target[1])
                else:
                    acc |= pe[target]
            pe[nid] = frozenset(acc)
        self._pert_edges = pe
        self._pert_vertices = {
            nid: frozenset(
                v for eid in eids for v in self.graph.endpoints(eid)
            )
            for nid, eids in pe.items()
        }

    # -- queries -----------------------------------------------------------

    def postorder(self) -> list[int]:
        """Children before parents; the root comes last."""
        return list(self._postorder)

    def q_nodes(self) -> list[int]:
        return sorted(n for n, nd in self.nodes.items() if nd.kind == "Q")

    def pertinent_edge_ids(self, nid: int) -> frozenset:
        return self._pert_edges[nid]

    def pertinent_vertices(self, nid: int) -> frozenset:
        return self._pert_vertices[nid]

    def pertinent_graph(self, nid: int) -> Graph:
        if nid == self.root:
            raise GraphError("the root has no pertinent graph")
        eids = self._pert_edges[nid]
        return Graph(
            self._pert_vertices[nid],
            {eid: self.graph.endpoints(eid) for eid in eids},
        )

    def real_edge_of_q(self, nid: int) -> int:
        (geid,) = [t[1] for t in self.nodes[nid].child_map.values() if _is_real(t)]
        return geid

    def reroot(self, q_node: int) -> "SpqrTree":
        if self.nodes[q_node].kind != "Q":
            raise GraphError("reroot target must be a Q node")
        return SpqrTree(
            self.graph, self._cores, self._links, self.real_edge_of_q(q_node)
        )

    def canonical_form(self):
        """Root-independent multiset of skeleton shapes."""
        shapes = []
        for kind, skel, _realmap in self._cores.values():
            endpoints = sorted(
                tuple(sorted(skel.endpoints(e), key=id_sort_key))
                for e in skel.edge_ids()
            )
            shapes.append((kind, tuple(endpoints)))
        return tuple(sorted(shapes))

    def dump(self) -> str:
        lines = []
        for nid in sorted(self.nodes):
            nd = self.nodes[nid]
            skel_edges = ", ".join(
                f"{e}:{nd.skeleton.endpoints(e)[0]}-{nd.skeleton.endpoints(e)[1]}"
                for e in nd.skeleton.edge_ids()
            )
            kids = []
            for eid in sorted(nd.child_map):
                t = nd.child_map[eid]
                kids.append(f"{eid}->edge {t[1]}" if _is_real(t) else f"{eid}->node {t}")
            tag = " (root)" if nid == self.root else ""
            lines.append(
                f"node {nid}{tag} kind={nd.kind} poles={nd.poles[0]}-{nd.poles[1]} "
                f"ref={nd.ref_edge} skeleton[{skel_edges}] children[{'; '.join(kids)}]"
            )
        return "\n".join(lines)

    # -- validation (used by the structural test suite) ---------------------

    def validate(self) -> None:
        g = self.graph
        seen_real: list[int] = []
        for nid, nd in self.nodes.items():
            skel = nd.skeleton
            if nd.kind == "Q":
                assert skel.num_edges() == 2 and skel.num_vertices() == 2
            elif nd.kind == "P":
                pairs = {frozenset(skel.endpoints(e)) for e in skel.edge_ids()}
                assert len(pairs) == 1 and skel.num_edges() >= 3
            elif nd.kind == "S":
                assert skel.num_edges() == skel.num_vertices() >= 3
                assert all(skel.degree(v) == 2 for v in skel.vertices)
            elif nd.kind == "R":
                assert skel.num_vertices() >= 4
                pairs = [frozenset(skel.endpoints(e)) for e in skel.edge_ids()]
                assert len(set(pairs)) == len(pairs), "R skeleton must be simple"
                assert _is_triconnected_simple(skel)
            else:
                raise AssertionError(f"unknown kind {nd.kind}")
            if nd.parent is not None:
                pk = self.nodes[nd.parent].kind
                if nd.kind in ("S", "P"):
                    assert pk != nd.kind, "equal kinds must not be adjacent"
            seen_real.extend(nd.real_edges())
            if nid != self.root and not nd.children() and nd.kind != "Q":
                raise AssertionError("non-Q leaf")
        assert sorted(seen_real) == g.edge_ids(), "real edges must partition"
        child = self.nodes[self.root].children()
        assert self.nodes[self.root].kind == "Q"
        assert len(child) == 1
        assert self._pert_edges[self.root] == frozenset(g.edge_ids())


def _is_triconnected_simple(skel: Graph) -> bool:
    edges = {e: skel.endpoints(e) for e in skel.edge_ids()}
    for a, b in itertools.combinations(sorted(skel.vertices, key=id_sort_key), 2):
        sub = {e: uv for e, uv in edges.items() if a not in uv and b not in uv}
        remaining = skel.vertices - {a, b}
        if not remaining:
            continue
        adj = _adjacency(sub)
        comps = _components_avoiding(sub, adj, set())
        isolated = remaining - set(adj)
        if len(comps) + len(isolated) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Build
# ---------------------------------------------------------------------------


def build_spqr(g: Graph, root_real_eid: int | None = None) -> SpqrTree:
    """Decompose a simple biconnected graph on at least three vertices."""
    if g.skeleton:
        raise GraphError("decomposition input must be a simple graph")
    if g.num_vertices() < 3:
        raise NotBiconnectedError("decomposition needs at least 3 vertices")
    if not is_biconnected(g):
        raise NotBiconnectedError("graph is not biconnected")

    # all skeleton edge ids come from one counter above the real ids, so the
    # embedding composition never sees an id clash between skeleton-local
    # virtual edges and real edges of g
    next_eid = itertools.count(max(g.edge_ids()) + 1)
    tags: dict[int, tuple] = {}
    initial: dict[int, tuple] = {}
    for geid in g.edge_ids():
        deid = next(next_eid)
        tags[deid] = (REAL, geid)
        initial[deid] = g.endpoints(geid)
    next_pair = itertools.count()

    # split until every piece is a bond, a cycle, or triconnected simple
    final_pieces: list[dict] = []
    worklist = [initial]
    while worklist:
        piece = worklist.pop()
        split = _find_valid_split(piece)
        if split is None:
            final_pieces.append(piece)
            continue
        a, b, side1, side2 = split
        pid = next(next_pair)
        v1, v2 = next(next_eid), next(next_eid)
        tags[v1] = ("virt", pid)
        tags[v2] = ("virt", pid)
        p1 = {e: piece[e] for e in side1}
        p1[v1] = (a, b)
        p2 = {e: piece[e] for e in side2}
        p2[v2] = (a, b)
        worklist.append(p1)
        worklist.append(p2)

    # merge adjacent equal-kind bonds and cycles
    comp_of_edge = {}
    pieces = {i: p for i, p in enumerate(final_pieces)}
    for i, p in pieces.items():
        for e in p:
            comp_of_edge[e] = i
    pair_sides: dict[int, list[int]] = {}
    for e, tag in tags.items():
        if tag[0] == "virt" and e in comp_of_edge:
            pair_sides.setdefault(tag[1], []).append(e)

    def kind_of(cid: int) -> str:
        return _classify(pieces[cid])

    changed = True
    while changed:
        changed = False
        for pid in sorted(pair_sides):
            e1, e2 = pair_sides[pid]
            c1, c2 = comp_of_edge[e1], comp_of_edge[e2]
            if c1 == c2:
                continue
            k1, k2 = kind_of(c1), kind_of(c2)
            if k1 != k2 or k1 == "R":
                continue
            merged = dict(pieces[c1])
            merged.update(pieces[c2])
            del merged[e1]
            del merged[e2]
            pieces[c1] = merged
            for e in pieces[c2]:
                if e not in (e1, e2):
                    comp_of_edge[e] = c1
            del pieces[c2]
            del pair_sides[pid]
            changed = True
            break

    # assemble cores: internal components plus one Q node per real edge
    cores: dict[int, tuple] = {}
    links: dict[tuple, tuple] = {}
    sorted_comps = sorted(
        pieces.items(),
        key=lambda kv: tuple(
            sorted(
                (tuple(sorted(map(id_sort_key, uv))), tags[e])
                for e, uv in kv[1].items()
            )
        ),
    )
    remap: dict[int, int] = {}
    for new_id, (cid, piece) in enumerate(sorted_comps):
        remap[cid] = new_id
    q_base = len(sorted_comps)
    q_ids = {geid: q_base + i for i, geid in enumerate(g.edge_ids())}

    q_virt_eid = {geid: next(next_eid) for geid in g.edge_ids()}
    q_real_eid = {geid: next(next_eid) for geid in g.edge_ids()}

    for cid, piece in sorted_comps:
        nid = remap[cid]
        realmap: dict[int, tuple] = {}
        skel = Graph({v for uv in piece.values() for v in uv}, piece, skeleton=True)
        for e in sorted(piece):
            tag = tags[e]
            if tag[0] == REAL:
                geid = tag[1]
                qid = q_ids[geid]
                links[(nid, e)] = (qid, q_virt_eid[geid])
                links[(qid, q_virt_eid[geid])] = (nid, e)
            else:
                other = [x for x in pair_sides.get(tag[1], []) if x != e]
                if other:
                    onid = remap[comp_of_edge[other[0]]]
                    links[(nid, e)] = (onid, other[0])
        cores[nid] = (_classify(piece), skel, realmap)

    for geid, qid in q_ids.items():
        u, v = g.endpoints(geid)
        ev, er = q_virt_eid[geid], q_real_eid[geid]
        skel = Graph({u, v}, {ev: (u, v), er: (u, v)}, skeleton=True)
        cores[qid] = ("Q", skel, {er: (REAL, geid)})

    return SpqrTree(g, cores, links, root_real_eid)


# ---------------------------------------------------------------------------
# Embedding enumeration by composing skeleton embeddings
# ---------------------------------------------------------------------------


def _skeleton_rotations(tree: SpqrTree, nid: int) -> list[dict]:
    """All distinct embeddings of one skeleton, as rotation maps."""
    nd = tree.nodes[nid]
    skel = nd.skeleton
    if nd.kind in ("Q", "S"):
        return [{v: tuple(skel.incident_edges(v)) for v in skel.vertices}]
    if nd.kind == "P":
        u, v = skel.endpoints(skel.edge_ids()[0])
        eids = skel.edge_ids()
        anchor = nd.ref_edge if nd.ref_edge is not None else eids[0]
        others = [e for e in eids if e != anchor]
        out = []
        for perm in itertools.permutations(others):
            order = (anchor, *perm)
            out.append({u: order, v: tuple(reversed(order))})
        return out
    # R node: the triconnected embedding and its mirror
    emb = planar_embedding(skel.as_simple())
    if emb is None:
        raise GraphError("non-planar rigid skeleton; graph is not planar")
    return [dict(emb.rotation), dict(emb.mirrored().rotation)]


def r_skeleton_embedding(tree: SpqrTree, nid: int) -> CombinatorialEmbedding | None:
    """Fixed planar embedding of an R skeleton (None when non-planar)."""
    nd = tree.nodes[nid]
    emb = planar_embedding(nd.skeleton.as_simple())
    if emb is None:
        return None
    return CombinatorialEmbedding(nd.skeleton, emb.rotation)


def _splice(parent_rot: dict, child_rot: dict, at_edge: int, poles, ref_of_child: int) -> None:
    """Replace a virtual edge by the child's fan at both poles, in place."""
    for p in poles:
        order = list(child_rot[p])
        i = order.index(ref_of_child)
        fan = order[i + 1 :] + order[:i]
        here = list(parent_rot[p])
        j = here.index(at_edge)
        parent_rot[p] = tuple(here[:j]) + tuple(fan) + tuple(here[j + 1 :])
    for v, order in child_rot.items():
        if v not in poles:
            parent_rot[v] = order


def _compose(tree: SpqrTree, nid: int, pick: dict, ref_placeholder: int | None) -> dict:
    nd = tree.nodes[nid]
    rot = {v: tuple(order) for v, order in _skeleton_rotations(tree, nid)[pick[nid]].items()}
    rename: dict[int, int] = {}
    if nd.ref_edge is not None:
        rename[nd.ref_edge] = ref_placeholder
    for eid in sorted(nd.child_map):
        target = nd.child_map[eid]
        if _is_real(target):
            rename[eid] = target[1]
    if rename:
        rot = {
            v: tuple(rename.get(e, e) for e in order) for v, order in rot.items()
        }
    for eid in sorted(nd.child_map):
        target = nd.child_map[eid]
        if _is_real(target):
            continue
        child = target
        placeholder = -1 - child  # unique negative id per child
        child_rot = _compose(tree, child, pick, placeholder)
        poles = nd.skeleton.endpoints(eid)
        local = rename.get(eid, eid)
        _splice(rot, child_rot, local, poles, placeholder)
    return rot


def enumerate_planar_embeddings(tree: SpqrTree):
    """Yield each embedding of the underlying planar graph once, up to
    reflection of the whole sphere embedding."""
    g = tree.graph
    root = tree.nodes[tree.root]
    (child,) = root.children()
    root_real = tree.real_edge_of_q(tree.root)

    option_counts = {
        nid: len(_skeleton_rotations(tree, nid)) for nid in tree.nodes
    }
    node_order = sorted(tree.nodes)
    seen: set = set()
    for combo in itertools.product(*(range(option_counts[n]) for n in node_order)):
        pick = dict(zip(node_order, combo))
        rot = _compose(tree, child, pick, root_real)
        emb = CombinatorialEmbedding(g, rot)
        key = emb.canonical_key()
        mirror_key = emb.mirrored().canonical_key()
        canon = min(key, mirror_key)
        if canon in seen:
            continue
        seen.add(canon)
        if not emb.euler_genus_zero():
            raise AssertionError("composition produced a non-planar rotation")
        yield emb
