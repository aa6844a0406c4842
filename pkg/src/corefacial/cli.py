"""Command-line front end.

Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for unusable
input. Verdict commands print ``RESULT YES`` or ``RESULT NO`` as the first
line; diagnostics follow.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .fccp import solve_fccp
from .graph import GraphError, compute_faces
from .instances import FccpInstance, HppInstance, PepInstance
from .io import ParseError, format_fccp, format_hpp, parse_instance
from .oracle import DEFAULT_VERTEX_CAP, fccp_oracle
from .reductions import fccp_to_hpp, hpp_to_fccp, pep_to_fccp, pp_to_hpp
from .spqr import build_spqr

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2

ORACLE_CAP_ENV = "COREFACIAL_ORACLE_CAP"


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as ex:
        raise ParseError(0, f"cannot read {path}: {ex.strerror}") from ex
    return parse_instance(text)


def _as_fccp(inst, want: str | None):
    if isinstance(inst, FccpInstance):
        got = "fccp"
    elif isinstance(inst, HppInstance):
        got = "hpp"
    else:
        raise ParseError(0, "test expects an fccp or hpp instance")
    if want and want != got:
        raise ParseError(0, f"--format {want} but the file holds {got}")
    return inst if got == "fccp" else hpp_to_fccp(inst), got


def _cmd_test(args) -> int:
    inst, _ = _as_fccp(_load(args.file), args.format)
    trace: list[str] | None = [] if args.trace else None
    verdict = solve_fccp(inst, trace=trace)
    print("RESULT YES" if verdict else "RESULT NO")
    if trace:
        for line in trace:
            print(line)
    return EXIT_YES if verdict else EXIT_NO


def _cmd_oracle(args) -> int:
    inst, _ = _as_fccp(_load(args.file), args.format)
    cap = args.cap
    if cap is None:
        cap = int(os.environ.get(ORACLE_CAP_ENV, DEFAULT_VERTEX_CAP))
    verdict = fccp_oracle(inst, cap=cap)
    print("RESULT YES" if verdict else "RESULT NO")
    return EXIT_YES if verdict else EXIT_NO


def _cmd_reduce(args) -> int:
    inst = _load(args.file)
    src, dst = args.source, args.target
    kinds = {FccpInstance: "fccp", HppInstance: "hpp", PepInstance: "pep"}
    got = kinds.get(type(inst), "pp" if isinstance(inst, tuple) else "?")
    if got != src:
        raise ParseError(0, f"--from {src} but the file holds {got}")
    if (src, dst) == ("pp", "hpp"):
        g, protected = inst
        out = format_hpp(pp_to_hpp(g, protected))
    elif (src, dst) == ("pp", "fccp"):
        g, protected = inst
        out = format_fccp(hpp_to_fccp(pp_to_hpp(g, protected)))
    elif (src, dst) == ("hpp", "fccp"):
        out = format_fccp(hpp_to_fccp(inst))
    elif (src, dst) == ("fccp", "hpp"):
        out = format_hpp(fccp_to_hpp(inst))
    elif (src, dst) == ("pep", "fccp"):
        out = format_fccp(pep_to_fccp(inst))
    elif (src, dst) == ("pep", "hpp"):
        out = format_hpp(fccp_to_hpp(pep_to_fccp(inst)))
    else:
        raise ParseError(0, f"no reduction from {src} to {dst}")
    sys.stdout.write(out)
    return EXIT_YES


def _instance_graph(inst):
    if isinstance(inst, (FccpInstance, HppInstance)):
        return inst.graph
    if isinstance(inst, PepInstance):
        return inst.graph
    if isinstance(inst, tuple):
        return inst[0]
    raise ParseError(0, "this command expects a graph-bearing instance")


def _cmd_spqr(args) -> int:
    g = _instance_graph(_load(args.file))
    tree = build_spqr(g)
    print(tree.dump())
    return EXIT_YES


def _cmd_faces(args) -> int:
    emb = _load(args.file)
    if not hasattr(emb, "rotation"):
        raise ParseError(0, "faces expects an emb file")
    faces = compute_faces(emb)
    euler = "planar" if emb.euler_genus_zero() else "non-planar"
    print(f"faces {len(faces)} ({euler} rotation)")
    for i, face in enumerate(faces):
        walk = " ".join(f"{d[1]}>{d[2]}" for d in face.boundary)
        print(f"face {i}: {walk}")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="corefacial",
        description="Constrained planarity with core-facial pair constraints.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="decide an instance with the tree solver")
    t.add_argument("file")
    t.add_argument("--format", choices=("fccp", "hpp"))
    t.add_argument("--trace", action="store_true", help="print per-node bag traces")
    t.set_defaults(func=_cmd_test)

    o = sub.add_parser("oracle", help="decide by exhaustive embedding search")
    o.add_argument("file")
    o.add_argument("--format", choices=("fccp", "hpp"))
    o.add_argument("--cap", type=int, help=f"vertex cap (default {DEFAULT_VERTEX_CAP}, env {ORACLE_CAP_ENV})")
    o.set_defaults(func=_cmd_oracle)

    r = sub.add_parser("reduce", help="translate between instance kinds")
    r.add_argument("file")
    r.add_argument("--from", dest="source", required=True, choices=("pp", "pep", "hpp", "fccp"))
    r.add_argument("--to", dest="target", required=True, choices=("hpp", "fccp"))
    r.set_defaults(func=_cmd_reduce)

    s = sub.add_parser("spqr", help="dump the decomposition tree")
    s.add_argument("file")
    s.set_defaults(func=_cmd_spqr)

    f = sub.add_parser("faces", help="dump the faces of an embedding file")
    f.add_argument("file")
    f.set_defaults(func=_cmd_faces)
    return p


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return EXIT_ERROR if ex.code else EXIT_YES
    try:
        return args.func(args)
    except ParseError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_ERROR
    except GraphError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
