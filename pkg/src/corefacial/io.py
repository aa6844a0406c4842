"""Line-oriented instance files.

Four headers are understood. Blank lines and ``#`` comments are ignored;
vertex names are bare tokens. Edges are declared with their class tag:

    fccp               hpp                pep                pp
    v a                v a                v a                v a
    e a b 1|2          e a b p|s|t        e a b h|g          e a b f|g
    w a b                                 rot a b c ...

``rot`` lines give the cyclic neighbor order of the pre-embedded subgraph,
one line per vertex of it. A bare embedded graph for face dumps uses the
``emb`` header with ``e a b`` and ``rot`` lines.
"""

from __future__ import annotations

from .graph import CombinatorialEmbedding, Graph, GraphError
from .instances import FccpInstance, HppInstance, InstanceError, PepInstance

HEADERS = ("fccp", "hpp", "pep", "pp", "emb")


class ParseError(ValueError):
    """Malformed instance file; carries the offending line number."""

    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str):
    """Parse a file into its instance object; the header picks the kind."""
    rows = list(_tokens(text))
    if not rows:
        raise ParseError(0, "empty file")
    lineno, head = rows[0]
    if len(head) != 1 or head[0] not in HEADERS:
        raise ParseError(lineno, f"expected one of {HEADERS} as the header")
    kind = head[0]
    body = rows[1:]
    if kind == "fccp":
        return _parse_fccp(body)
    if kind == "hpp":
        return _parse_hpp(body)
    if kind == "pep":
        return _parse_pep(body)
    if kind == "pp":
        return _parse_pp(body)
    return _parse_emb(body)


def _collect(body, edge_tags, extra_kinds=()):
    vertices: list = []
    edges: list[tuple] = []
    tags: list[str] = []
    extras: dict[str, list] = {k: [] for k in extra_kinds}
    for lineno, toks in body:
        kind = toks[0]
        if kind == "v":
            if len(toks) != 2:
                raise ParseError(lineno, "v takes one vertex name")
            vertices.append(toks[1])
        elif kind == "e":
            if len(toks) != 4:
                raise ParseError(lineno, "e takes: e <u> <v> <class>")
            if toks[3] not in edge_tags:
                raise ParseError(lineno, f"edge class must be one of {edge_tags}")
            edges.append((toks[1], toks[2]))
            tags.append(toks[3])
        elif kind in extras:
            extras[kind].append((lineno, toks[1:]))
        else:
            raise ParseError(lineno, f"unknown directive {kind!r}")
    names = set(vertices)
    for lineno, toks in body:
        if toks[0] == "e":
            for v in toks[1:3]:
                if v not in names:
                    raise ParseError(lineno, f"edge endpoint {v!r} was never declared")
    return vertices, edges, tags, extras


def _build_graph(lineno0, vertices, edges) -> Graph:
    try:
        return Graph(vertices, edges)
    except GraphError as ex:
        raise ParseError(lineno0, str(ex)) from ex


def _parse_fccp(body) -> FccpInstance:
    vertices, edges, tags, extras = _collect(body, ("1", "2"), extra_kinds=("w",))
    g = _build_graph(1, vertices, edges)
    core = frozenset(i for i, t in enumerate(tags) if t == "1")
    pairs = []
    for lineno, toks in extras["w"]:
        if len(toks) != 2:
            raise ParseError(lineno, "w takes: w <x> <y>")
        x, y = toks
        if x not in g.vertices or y not in g.vertices:
            raise ParseError(lineno, f"pair endpoint not declared: {toks}")
        if x == y:
            raise ParseError(lineno, "pair endpoints must differ")
        pairs.append((x, y))
    try:
        return FccpInstance.build(g, core, pairs)
    except InstanceError as ex:
        raise ParseError(1, str(ex)) from ex


def _parse_hpp(body) -> HppInstance:
    vertices, edges, tags, _ = _collect(body, ("p", "s", "t"))
    g = _build_graph(1, vertices, edges)
    return HppInstance(g, {i: t for i, t in enumerate(tags)})


def _parse_pp(body):
    vertices, edges, tags, _ = _collect(body, ("f", "g"))
    g = _build_graph(1, vertices, edges)
    protected = frozenset(i for i, t in enumerate(tags) if t == "f")
    return g, protected


def _read_rotation(g: Graph, sub_edges, extras) -> CombinatorialEmbedding:
    sub = g.subgraph_of_edges(sub_edges)
    eid_of = {frozenset(sub.endpoints(e)): e for e in sub.edge_ids()}
    rotation = {}
    for lineno, toks in extras["rot"]:
        if len(toks) < 2:
            raise ParseError(lineno, "rot takes: rot <v> <n1> <n2> ...")
        v, *nbrs = toks
        if v not in sub.vertices:
            raise ParseError(lineno, f"{v!r} is not a vertex of the embedded part")
        order = []
        for w in nbrs:
            key = frozenset((v, w))
            if key not in eid_of:
                raise ParseError(lineno, f"({v},{w}) is not an embedded edge")
            order.append(eid_of[key])
        rotation[v] = tuple(order)
    missing = sorted(set(map(str, sub.vertices)) - {str(v) for v in rotation})
    if missing:
        raise ParseError(0, f"rot lines missing for vertices {missing}")
    try:
        return CombinatorialEmbedding(sub, rotation)
    except GraphError as ex:
        raise ParseError(0, str(ex)) from ex


def _parse_pep(body) -> PepInstance:
    vertices, edges, tags, extras = _collect(body, ("h", "g"), extra_kinds=("rot",))
    g = _build_graph(1, vertices, edges)
    fixed = frozenset(i for i, t in enumerate(tags) if t == "h")
    emb = _read_rotation(g, fixed, extras)
    try:
        return PepInstance(g, fixed, emb)
    except InstanceError as ex:
        raise ParseError(1, str(ex)) from ex


def _parse_emb(body) -> CombinatorialEmbedding:
    vertices: list = []
    edges: list[tuple] = []
    extras: dict[str, list] = {"rot": []}
    for lineno, toks in body:
        if toks[0] == "v" and len(toks) == 2:
            vertices.append(toks[1])
        elif toks[0] == "e" and len(toks) == 3:
            edges.append((toks[1], toks[2]))
        elif toks[0] == "rot":
            extras["rot"].append((lineno, toks[1:]))
        else:
            raise ParseError(lineno, f"unknown or malformed directive {toks[0]!r}")
    g = _build_graph(1, vertices, edges)
    return _read_rotation(g, g.edge_ids(), extras)


def format_fccp(inst: FccpInstance) -> str:
    lines = ["fccp"]
    g = inst.graph
    for v in g.sorted_vertices():
        lines.append(f"v {v}")
    for eid in g.edge_ids():
        u, v = g.endpoints(eid)
        cls = "1" if eid in inst.core else "2"
        lines.append(f"e {u} {v} {cls}")
    for x, y in sorted(inst.pairs):
        lines.append(f"w {x} {y}")
    return "\n".join(lines) + "\n"


def format_hpp(inst: HppInstance) -> str:
    lines = ["hpp"]
    g = inst.graph
    for v in g.sorted_vertices():
        lines.append(f"v {v}")
    for eid in g.edge_ids():
        u, v = g.endpoints(eid)
        lines.append(f"e {u} {v} {inst.classes[eid]}")
    return "\n".join(lines) + "\n"
