"""Deliberately broken embeddings used to show that the sweeps have teeth."""
from __future__ import annotations

from dataclasses import replace
from typing import Callable

from .core import GRAPH, FiniteStructure, graph_edges
from .embed_graph import D1, D2, R, node_gadget, node_vertex, succ_gadget, succ_vertex
from .embed_order import OrderElement, f_map, first_in_class
from .field import FieldPresentation
from .harness import (
    EmbeddingUnderTest,
    SweepReport,
    check_iso_preservation,
    check_orbit_correspondence,
    graph_family,
    graph_field_embedding,
    graph_order_embedding,
    tree_family,
    tree_graph_embedding,
)


def _depths(A: FiniteStructure) -> dict[int, int]:
    (root,) = next(iter(A.relations["root"]))
    kids: dict[int, list[int]] = {}
    for a, b in A.relations["S"]:
        kids.setdefault(a, []).append(b)
    depth, todo = {root: 0}, [root]
    while todo:
        a = todo.pop()
        for b in kids.get(a, []):
            depth[b] = depth[a] + 1
            todo.append(b)
    return depth


def _tree_encoder(keep_pair: Callable[[FiniteStructure, int, int], bool],
                  gadget: Callable[[int, int], tuple] = succ_gadget):
    def encode(A: FiniteStructure) -> FiniteStructure:
        vertices, edges = [], []
        for a in A.universe:
            vs, es = node_gadget(a)
            vertices += vs
            edges += es
        pairs = sorted(A.relations["S"]) + [(a, a) for (a,) in A.relations["root"]]
        for a, b in pairs:
            if keep_pair(A, a, b):
                vs, es = gadget(a, b)
                vertices += vs
                edges += es
        E = set(edges) | {(v, u) for u, v in edges}
        return FiniteStructure(GRAPH, tuple(vertices), {"E": E})
    return encode


def _short_chains(a: int, b: int) -> tuple:
    vs, es = succ_gadget(a, b)
    d1, d2 = succ_vertex(D1, a, b), succ_vertex(D2, a, b)
    vs = [v for v in vs if v != d1]
    es = [e for e in es if d1 not in e] + [(node_vertex(R, b), d2)]
    return vs, es


class _ProductRadicands(FieldPresentation):
    def __init__(self, *args):
        super().__init__(*args)
        self.radicands = tuple(self.b(u) * self.b(v) for u, v in self.radicals)


def _order_f(mutate: Callable[[FiniteStructure, tuple], OrderElement]):
    return graph_order_embedding(tuple_map=mutate)


def _last_r_in_q0(G: FiniteStructure, a: tuple) -> OrderElement:
    x = f_map(G, a)
    return OrderElement(x.body[:-1] + (first_in_class(0),), x.tail)


def _swapped_classes(G: FiniteStructure, a: tuple) -> OrderElement:
    u = G.universe
    swap = {u[0]: u[1], u[1]: u[0]} if len(u) >= 2 else {}
    return f_map(G, tuple(swap.get(v, v) for v in a))


def mutants() -> list[EmbeddingUnderTest]:
    tg = tree_graph_embedding()
    gf = graph_field_embedding(0)
    out = [
        replace(tg, name="tree-graph/no-root-self-gadget",
                encode=_tree_encoder(lambda A, a, b: a != b)),
        replace(tg, name="tree-graph/no-deep-successor-gadgets",
                encode=_tree_encoder(lambda A, a, b: a == b or _depths(A)[b] < 2)),
        replace(tg, name="tree-graph/equal-chain-lengths",
                encode=_tree_encoder(lambda A, a, b: True, _short_chains)),
        replace(gf, name="graph-field/dropped-edge-radical",
                encode=lambda G: FieldPresentation(0, G.universe, graph_edges(G)[1:])),
        replace(gf, name="graph-field/product-radicands",
                encode=lambda G: _ProductRadicands(0, G.universe, graph_edges(G))),
        replace(_order_f(_last_r_in_q0), name="graph-order/last-r-in-Q0"),
        replace(_order_f(_swapped_classes), name="graph-order/swapped-classes"),
    ]
    return out


def run_detection(E: EmbeddingUnderTest) -> list[SweepReport]:
    """The sweeps applied to a mutant: iso preservation, then orbits for k = 1, 2."""
    if E.name.startswith("tree-graph"):
        family, orbit_family = tree_family(4), tree_family(3)
    else:
        family, orbit_family = graph_family(3), graph_family(3)
    reports = [check_iso_preservation(E, family)]
    for A in orbit_family:
        for k in (1, 2):
            reports.append(check_orbit_correspondence(E, A, k))
    return reports


def caught(E: EmbeddingUnderTest) -> tuple[bool, dict | None]:
    for rep in run_detection(E):
        if not rep.passed:
            return True, rep.to_json()
    return False, None


__all__ = ["mutants", "run_detection", "caught"]
