"""Coding trees into undirected graphs with triangle and square gadgets.

Each tree element ``a`` becomes a vertex r(a) with a pendant triangle.
Each successor pair (a, a') becomes a vertex q(a, a') with a pendant
square, joined to r(a) by a path with 2 edges and to r(a') by a path with
3 edges.  The root counts as its own successor.  Chain lengths count
edges.  Vertex ids are ``pair(slot, source)`` where the slot names the
gadget position, so images are reproducible bit for bit.
"""
from __future__ import annotations

from .core import (
    EQ,
    GRAPH,
    AtomicDiagram,
    Fact,
    FiniteStructure,
    is_simple_graph,
    pair,
    to_dot,
    unpair,
)
from .errors import DecodeError
from .trees import TREE, FiniteTree, structure_to_tree

# gadget slots
R, T0, T1, T2 = 0, 1, 2, 3
Q, S0, S1, S2, S3 = 4, 5, 6, 7, 8
C2, D1, D2 = 9, 10, 11

SLOT_KIND = {
    R: "node-rep", T0: "node-triangle", T1: "node-triangle", T2: "node-triangle",
    Q: "succ-rep", S0: "succ-square", S1: "succ-square", S2: "succ-square", S3: "succ-square",
    C2: "chain2", D1: "chain3", D2: "chain3",
}
KIND_COLOR = {
    "node-rep": "red", "node-triangle": "orange", "succ-rep": "blue",
    "succ-square": "lightblue", "chain2": "gray40", "chain3": "gray70",
}


def node_vertex(slot: int, a: int) -> int:
    return pair(slot, a)


def succ_vertex(slot: int, a: int, b: int) -> int:
    return pair(slot, pair(a, b))


def vertex_kind(v: int) -> str:
    return SLOT_KIND[unpair(v)[0]]


def node_gadget(a: int) -> tuple[list[int], list[tuple[int, int]]]:
    r, t0, t1, t2 = (node_vertex(s, a) for s in (R, T0, T1, T2))
    return [r, t0, t1, t2], [(r, t0), (t0, t1), (t1, t2), (t2, t0)]


def succ_gadget(a: int, b: int) -> tuple[list[int], list[tuple[int, int]]]:
    q, s0, s1, s2, s3, c, d1, d2 = (succ_vertex(s, a, b) for s in (Q, S0, S1, S2, S3, C2, D1, D2))
    ra, rb = node_vertex(R, a), node_vertex(R, b)
    edges = [(q, s0), (s0, s1), (s1, s2), (s2, s3), (s3, s0),
             (ra, c), (c, q),
             (rb, d1), (d1, d2), (d2, q)]
    return [q, s0, s1, s2, s3, c, d1, d2], edges


def _facts(vertices, edges) -> set[Fact]:
    out = {Fact(EQ, (v, v), True) for v in vertices}
    for u, v in edges:
        out.add(Fact("E", (u, v), True))
        out.add(Fact("E", (v, u), True))
    return out


class TreeGraphOperator:
    """Fragment-wise coding: each positive tree fact contributes its gadget."""

    source_signature = TREE
    target_signature = GRAPH

    def apply(self, fragment: AtomicDiagram) -> AtomicDiagram:
        out: set[Fact] = set()
        for f in fragment.positive():
            if f.symbol == EQ and f.args[0] == f.args[1]:
                out |= _facts(*node_gadget(f.args[0]))
            elif f.symbol == "S":
                a, b = f.args
                vs, es = succ_gadget(a, b)
                out |= _facts(vs + [node_vertex(R, a), node_vertex(R, b)], es)
            elif f.symbol == "root":
                (a,) = f.args
                vs, es = succ_gadget(a, a)
                out |= _facts(vs + [node_vertex(R, a)], es)
        return AtomicDiagram(frozenset(out))


def tree_graph_operator() -> TreeGraphOperator:
    return TreeGraphOperator()


def encode_structure(A: FiniteStructure) -> FiniteStructure:
    """Code a tree given in the {S, root} signature."""
    vertices: list[int] = []
    edges: list[tuple[int, int]] = []
    pairs = sorted(A.relations["S"]) + [(a, a) for (a,) in sorted(A.relations["root"])]
    for a in A.universe:
        vs, es = node_gadget(a)
        vertices += vs
        edges += es
    for a, b in pairs:
        vs, es = succ_gadget(a, b)
        vertices += vs
        edges += es
    E = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    return FiniteStructure(GRAPH, tuple(vertices), {"E": E})


def encode_tree(T: FiniteTree) -> FiniteStructure:
    return encode_structure(T.to_structure())


def tree_node_vertices(T: FiniteTree) -> dict[tuple, int]:
    """r(a) for each node of ``T`` (ids as in :meth:`FiniteTree.to_structure`)."""
    return {s: node_vertex(R, i) for i, s in enumerate(T.sorted_nodes())}


# ---------------------------------------------------------------------------
# decoding

def _pendant_triangle(adj, deg, x) -> list[int] | None:
    for t0 in adj[x]:
        if deg[t0] != 3:
            continue
        others = sorted(adj[t0] - {x})
        if len(others) == 2:
            t1, t2 = others
            if t2 in adj[t1] and deg[t1] == 2 and deg[t2] == 2:
                return [t0, t1, t2]
    return None


def _pendant_square(adj, deg, q) -> list[int] | None:
    for s0 in adj[q]:
        if deg[s0] != 3:
            continue
        others = sorted(adj[s0] - {q})
        if len(others) != 2 or others[1] in adj[others[0]]:
            continue
        s1, s3 = others
        if deg[s1] != 2 or deg[s3] != 2:
            continue
        far = (adj[s1] & adj[s3]) - {s0}
        if len(far) == 1:
            (s2,) = far
            if deg[s2] == 2 and s2 not in adj[s0] and s2 != q:
                return [s0, s1, s2, s3]
    return None


def decode_relations(G: FiniteStructure) -> tuple[list[int], list[tuple[int, int]]]:
    """Evaluate the universe formula u(x) and successor formula s(x, y) on G.

    Returns the r-vertices and the successor pairs (self-pair for the root).
    """
    if not is_simple_graph(G):
        raise DecodeError("input is not a simple undirected graph")
    adj = {v: set() for v in G.universe}
    for u, v in G.relations["E"]:
        adj[u].add(v)
    deg = {v: len(adj[v]) for v in adj}
    used: set[int] = set()
    reps = []
    for x in G.universe:
        tri = _pendant_triangle(adj, deg, x)
        if tri is not None:
            reps.append(x)
            used.update([x, *tri])
    rep_set = set(reps)
    succ = []
    for q in G.universe:
        if q in rep_set or q in used:
            continue
        sq = _pendant_square(adj, deg, q)
        if sq is None:
            continue
        legs = sorted(adj[q] - {sq[0]})
        if len(legs) != 2 or any(deg[v] != 2 for v in legs):
            raise DecodeError(f"square-marked vertex {q} does not carry two chains")
        short = [v for v in legs if (adj[v] - {q}) <= rep_set]
        long_ = [v for v in legs if v not in short]
        if len(short) != 1 or len(long_) != 1:
            raise DecodeError(f"cannot tell the 2-chain from the 3-chain at {q}")
        (c,), (d2,) = short, long_
        (a,) = adj[c] - {q}
        (d1,) = adj[d2] - {q}
        if deg[d1] != 2:
            raise DecodeError(f"3-chain at {q} is malformed")
        (b,) = adj[d1] - {d2}
        if b not in rep_set:
            raise DecodeError(f"3-chain at {q} does not end at a tree element")
        succ.append((a, b))
        used.update([q, *sq, c, d1, d2])
    if used != set(G.universe):
        stray = sorted(set(G.universe) - used)[:5]
        raise DecodeError(f"vertices outside every gadget: {stray}")
    expected_edges = 4 * len(reps) + 10 * len(succ)
    if len(G.relations["E"]) != 2 * expected_edges:
        raise DecodeError("edge count does not match the gadget inventory")
    return reps, succ


def decode_graph(G: FiniteStructure) -> FiniteTree:
    if not G.universe:
        return FiniteTree()
    reps, succ = decode_relations(G)
    roots = [a for a, b in succ if a == b]
    if len(roots) != 1:
        raise DecodeError(f"expected one self-successor (the root), found {len(roots)}")
    ids = {r: i for i, r in enumerate(reps)}
    rels = {"S": {(ids[a], ids[b]) for a, b in succ if a != b}, "root": {(ids[roots[0]],)}}
    return structure_to_tree(FiniteStructure(TREE, tuple(ids.values()), rels))


def graph_to_dot(G: FiniteStructure) -> str:
    colors = {}
    for v in G.universe:
        try:
            colors[v] = KIND_COLOR[vertex_kind(v)]
        except KeyError:
            pass
    return to_dot(G, "E", colors, name="tree_graph")
