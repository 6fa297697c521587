"""Command-line entry point.

Exit codes: 0 on success, 1 when a checked property fails (the report with
its counterexample is still printed), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Sequence

from . import __version__
from .backforth import scott_report
from .config import PROFILE_ENV, get_budgets
from .core import FiniteStructure, is_simple_graph, make_graph, orbits, to_dot
from .embed_graph import decode_graph, encode_tree, graph_to_dot
from .embed_order import OrderElement, enumerate_fragment
from .errors import ScottkitError
from .field import FieldPresentation, build_field, decode_field
from .harness import (
    ALIASES,
    EMBEDDINGS,
    check_iso_preservation,
    check_orbit_correspondence,
    decode_fragment,
    graph_field_embedding,
    graph_order_embedding,
    source_family,
    transfer_family,
)
from .trees import FiniteTree, LevelSpec, generate_rank_homogeneous, structure_to_tree, tree_ranks

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(flag: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{flag} must be positive, got {value}")
        return value
    return parse


def _natural(flag: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{flag} must be non-negative, got {value}")
        return value
    return parse


def _embedding(text: str) -> str:
    name = ALIASES.get(text, text)
    if name not in EMBEDDINGS:
        raise argparse.ArgumentTypeError(
            f"unknown embedding {text!r}; choose from {sorted(EMBEDDINGS)}")
    return name


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--seed", type=_natural("--seed"), default=DEFAULT_SEED)
    common.add_argument("--step-cap", type=_positive("--step-cap"), default=None)

    p = _Parser(prog="scottkit", description="Back-and-forth ranks, tree ranks and "
                "finite-scale checks of computable structure embeddings.",
                epilog=f"Budget presets: set {PROFILE_ENV}=default|small|large.")
    p.add_argument("--version", action="version", version=f"scottkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a tree or graph")
    g.add_argument("kind", choices=("tree", "graph"))
    g.add_argument("--max-size", type=_positive("--max-size"), default=5)
    g.add_argument("--spec", help="LevelSpec JSON file for a rank-homogeneous tree")
    g.add_argument("--k", type=_positive("--k"), default=2)
    g.add_argument("--depth", type=_natural("--depth"), default=3)
    g.add_argument("--edge-prob", type=float, default=0.5)

    for name, text in (("embed", "encode a source structure"), ("decode", "decode an image")):
        e = sub.add_parser(name, parents=[common], help=text)
        e.add_argument("embedding", type=_embedding)
        e.add_argument("input", help="JSON file, or - for standard input")
        e.add_argument("--char", type=_natural("--char"), default=0)
        e.add_argument("--max-len", type=_positive("--max-len"), default=2)
        e.add_argument("--height", type=_natural("--height"), default=0)

    s = sub.add_parser("scott-rank", parents=[common], help="Scott rank of a finite structure")
    s.add_argument("input")

    t = sub.add_parser("tree-rank", parents=[common], help="tree ranks of every node")
    t.add_argument("input")
    t.add_argument("--node", help="comma-separated node, e.g. 0,1 (empty string for the root)")

    o = sub.add_parser("orbits", parents=[common], help="automorphism orbits on k-tuples")
    o.add_argument("input")
    o.add_argument("--k", type=_positive("--k"), default=1)

    w = sub.add_parser("sweep", parents=[common], help="run a property sweep")
    w.add_argument("property", choices=("iso", "orbits", "transfer"))
    w.add_argument("--embedding", type=_embedding, required=True)
    w.add_argument("--max-size", type=_positive("--max-size"), default=4)
    w.add_argument("--k", type=_positive("--k"), default=1)
    w.add_argument("--char", type=_natural("--char"), default=0)
    w.add_argument("--max-len", type=_positive("--max-len"), default=2)
    w.add_argument("--height", type=_natural("--height"), default=0)
    w.add_argument("--target", help="JSON file with the transfer target (default: last family member)")
    return p


# ---------------------------------------------------------------------------
# input handling

def _read(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _as_structure(data: Any) -> FiniteStructure:
    if isinstance(data, dict) and "graph" in data:
        data = data["graph"]
    if isinstance(data, list):
        return FiniteTree.from_json(data).to_structure()
    if isinstance(data, dict) and "tree" in data:
        return FiniteTree.from_json(data["tree"]).to_structure()
    if isinstance(data, dict) and "signature" in data:
        return FiniteStructure.from_json(data)
    if isinstance(data, dict) and "vertices" in data and "edges" in data:
        return make_graph(data["vertices"], [tuple(e) for e in data["edges"]])
    raise UsageError("input is neither a structure, a graph, nor a tree")


def _as_tree(data: Any) -> FiniteTree:
    if isinstance(data, list):
        return FiniteTree.from_json(data)
    if isinstance(data, dict) and "tree" in data:
        return FiniteTree.from_json(data["tree"])
    return structure_to_tree(_as_structure(data))


def _as_graph(data: Any) -> FiniteStructure:
    G = _as_structure(data)
    if not is_simple_graph(G):
        raise UsageError("input must be a simple undirected graph over signature {E/2}")
    return G


# ---------------------------------------------------------------------------
# commands

def _random_tree(n: int, rng: random.Random) -> FiniteTree:
    nodes = [()]
    kids: dict[tuple, int] = {}
    for _ in range(n - 1):
        parent = rng.choice(nodes)
        child = parent + (kids.get(parent, 0),)
        kids[parent] = kids.get(parent, 0) + 1
        nodes.append(child)
    return FiniteTree(frozenset(nodes))


def cmd_gen(args, budgets) -> tuple[Any, int]:
    rng = random.Random(args.seed)
    if args.kind == "tree":
        if args.spec:
            T = generate_rank_homogeneous(LevelSpec.from_json(_read(args.spec)), args.k,
                                          args.depth, budgets)
        else:
            T = _random_tree(args.max_size, rng)
        if args.format == "dot":
            return to_dot(T.to_structure(), "S", name="tree"), 0
        return T.to_json(), 0
    n = args.max_size
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < args.edge_prob]
    G = make_graph(range(n), edges)
    return (to_dot(G, "E", name="graph") if args.format == "dot" else G.to_json()), 0


def cmd_embed(args, budgets) -> tuple[Any, int]:
    data = _read(args.input)
    if args.embedding == "tree-graph":
        G = encode_tree(_as_tree(data))
        return (graph_to_dot(G) if args.format == "dot" else G.to_json()), 0
    G = _as_graph(data)
    if args.embedding == "graph-field":
        F = build_field(G, args.char)
        return F.to_json(), 0
    frag = enumerate_fragment(G, args.max_len, args.height, budgets)
    return {"graph": G.to_json(), "max_len": args.max_len, "height": args.height,
            "fragment": [x.to_json() for x in frag]}, 0


def cmd_decode(args, budgets) -> tuple[Any, int]:
    data = _read(args.input)
    if args.embedding == "tree-graph":
        T = decode_graph(_as_graph(data))
        return (to_dot(T.to_structure(), "S", name="tree") if args.format == "dot"
                else T.to_json()), 0
    if args.embedding == "graph-field":
        G = decode_field(FieldPresentation.from_json(data))
    else:
        if not isinstance(data, dict) or "fragment" not in data:
            raise UsageError("order decoding expects the JSON written by `embed graph-order`")
        G = decode_fragment([OrderElement.from_json(x) for x in data["fragment"]])
    return (to_dot(G, "E", name="graph") if args.format == "dot" else G.to_json()), 0


def cmd_scott_rank(args, budgets) -> tuple[Any, int]:
    rep = scott_report(_as_structure(_read(args.input)), budgets)
    return rep.to_json(), 0


def cmd_tree_rank(args, budgets) -> tuple[Any, int]:
    T = _as_tree(_read(args.input))
    ranks = tree_ranks(T)
    if args.node is not None:
        try:
            node = tuple(int(x) for x in args.node.split(",") if x.strip())
        except ValueError:
            raise UsageError(f"--node expects comma-separated integers, got {args.node!r}") from None
        if node not in ranks:
            raise UsageError(f"--node {args.node!r} is not in the tree")
        return {"node": list(node), "rank": ranks[node]}, 0
    return {"ranks": [{"node": list(s), "rank": ranks[s]} for s in T.sorted_nodes()]}, 0


def cmd_orbits(args, budgets) -> tuple[Any, int]:
    A = _as_structure(_read(args.input))
    cells = orbits(A, args.k, budgets)
    return {"k": args.k, "orbits": [[list(t) for t in cell] for cell in cells]}, 0


def _sweep_embedding(args):
    if args.embedding == "graph-field":
        return graph_field_embedding(args.char)
    if args.embedding == "graph-order":
        return graph_order_embedding(args.max_len, args.height)
    return EMBEDDINGS[args.embedding]()


def cmd_sweep(args, budgets) -> tuple[Any, int]:
    E = _sweep_embedding(args)
    family = source_family(args.embedding, args.max_size)
    if args.property == "iso":
        rep = check_iso_preservation(E, family, budgets).to_json()
    elif args.property == "orbits":
        reports = [check_orbit_correspondence(E, A, args.k, budgets) for A in family]
        failed = [r for r in reports if not r.passed]
        rep = {"embedding": E.name, "property": "orbit-correspondence", "k": args.k,
               "passed": not failed, "instances": len(reports),
               "checked": sum(r.checked for r in reports),
               "failures": sum(r.failures for r in reports),
               "counterexample": failed[0].counterexample if failed else None}
    else:
        target = _as_structure(_read(args.target)) if args.target else family[-1]
        if target.signature != family[0].signature:
            raise UsageError(f"--target must use the source signature {list(family[0].signature.names)}")
        if args.embedding != "tree-graph" and not is_simple_graph(target):
            raise UsageError("--target must be a simple graph for graph embeddings")
        rep = transfer_family(E, family, target, budgets).to_json()
    rep["seed"] = args.seed
    rep["max_size"] = args.max_size
    return rep, 0 if rep["passed"] else 1


COMMANDS = {"gen": cmd_gen, "embed": cmd_embed, "decode": cmd_decode, "scott-rank": cmd_scott_rank,
            "tree-rank": cmd_tree_rank, "orbits": cmd_orbits, "sweep": cmd_sweep}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        budgets = get_budgets(step_cap=args.step_cap)
        result, code = COMMANDS[args.command](args, budgets)
    except UsageError as exc:
        print(f"scottkit: error: {exc}", file=sys.stderr)
        return 2
    except (ScottkitError, ValueError) as exc:
        print(f"scottkit: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        out.write(result if result.endswith("\n") else result + "\n")
    else:
        json.dump(result, out, sort_keys=True)
        out.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()


__all__ = ["run", "main", "build_parser"]
