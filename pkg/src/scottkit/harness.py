"""Finite-scale property sweeps over the shipped embeddings.

An embedding is packaged as an :class:`EmbeddingUnderTest`: an encoder from
source structures to image objects, a decoder back, an image-side
isomorphism test, the tuple map f, and an image-side orbit test.  The
sweeps check that isomorphism and orbits are reflected in both directions
and that decoding inverts encoding.  Every failing sweep carries the first
counterexample in instance order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .config import Budgets, get_budgets
from .core import FiniteStructure, isomorphic, make_graph, orbits
from .embed_graph import R as NODE_REP_SLOT
from .embed_graph import decode_graph, encode_structure, node_vertex
from .embed_order import (
    OrderElement,
    atomic_type_index,
    AtomicPattern,
    class_of,
    enumerate_fragment,
    f_map,
    g_decode,
    member,
    order_images_isomorphic,
    order_same_orbit,
)
from .errors import BudgetExceeded, ScottkitError
from .field import build_field, decode_field, field_same_orbit, presentations_isomorphic
from .trees import rooted_trees


@dataclass
class EmbeddingUnderTest:
    name: str
    encode: Callable[[FiniteStructure], Any]
    decode: Callable[[Any], FiniteStructure]
    images_isomorphic: Callable[[Any, Any], bool]
    tuple_map: Callable[[FiniteStructure, Any, tuple], Any]
    image_same_orbit: Callable[[Any, Any, Any], bool]
    tuple_decode: Callable[[FiniteStructure, Any, Any], tuple] | None = None


@dataclass
class SweepReport:
    embedding: str
    prop: str
    instances: int = 0
    checked: int = 0
    failures: int = 0
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, payload: dict):
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = payload

    def to_json(self) -> dict:
        return {"embedding": self.embedding, "property": self.prop, "passed": self.passed,
                "instances": self.instances, "checked": self.checked, "failures": self.failures,
                "counterexample": self.counterexample, **self.details}


def _iso(A: FiniteStructure, B: FiniteStructure, budgets: Budgets) -> bool:
    return A.signature == B.signature and isomorphic(A, B, budgets=budgets) is not None


def check_iso_preservation(E: EmbeddingUnderTest, instances: Sequence[FiniteStructure],
                           budgets: Budgets | None = None) -> SweepReport:
    """Round trip per instance, then source iso <=> image iso for every pair."""
    budgets = budgets or get_budgets()
    rep = SweepReport(E.name, "iso-preservation", instances=len(instances))
    images = []
    for i, A in enumerate(instances):
        try:
            B = E.encode(A)
            back = E.decode(B)
            ok = _iso(back, A, budgets)
        except BudgetExceeded:
            raise
        except ScottkitError as exc:
            B, ok = None, False
            rep.fail({"kind": "round-trip", "instance": i, "source": A.to_json(), "error": str(exc)})
        else:
            if not ok:
                rep.fail({"kind": "round-trip", "instance": i, "source": A.to_json(),
                          "decoded": back.to_json()})
        images.append(B)
        rep.checked += 1
    pairs = 0
    for i, j in itertools.combinations_with_replacement(range(len(instances)), 2):
        if images[i] is None or images[j] is None:
            continue
        src = _iso(instances[i], instances[j], budgets)
        img = E.images_isomorphic(images[i], images[j])
        pairs += 1
        rep.checked += 1
        if src != img:
            rep.fail({"kind": "pair", "instances": [i, j], "source_iso": src, "image_iso": img,
                      "sources": [instances[i].to_json(), instances[j].to_json()]})
    rep.details["pairs"] = pairs
    return rep


def _orbit_ids(cells) -> dict:
    return {t: i for i, cell in enumerate(cells) for t in cell}


def check_orbit_correspondence(E: EmbeddingUnderTest, A: FiniteStructure, k: int,
                               budgets: Budgets | None = None) -> SweepReport:
    """Same orbit in A <=> images under f in the same orbit, for all pairs of k-tuples."""
    budgets = budgets or get_budgets()
    rep = SweepReport(E.name, "orbit-correspondence", instances=1)
    B = E.encode(A)
    src = _orbit_ids(orbits(A, k, budgets))
    tuples = sorted(src)
    image = {t: E.tuple_map(A, B, t) for t in tuples}
    img_cells: list[list[tuple]] = []
    for t in tuples:
        for cell in img_cells:
            if E.image_same_orbit(B, image[cell[0]], image[t]):
                cell.append(t)
                break
        else:
            img_cells.append([t])
    img = _orbit_ids(img_cells)
    for s, t in itertools.combinations(tuples, 2):
        rep.checked += 1
        a, b = src[s] == src[t], img[s] == img[t]
        if a != b:
            rep.fail({"kind": "pair", "tuples": [list(s), list(t)], "source_same_orbit": a,
                      "image_same_orbit": b, "source": A.to_json()})
    for t in tuples:  # an image orbit must at least contain its own point
        if not E.image_same_orbit(B, image[t], image[t]):
            rep.fail({"kind": "self", "tuple": list(t), "source": A.to_json()})
    if E.tuple_decode is not None:
        for t in tuples:
            try:
                back = E.tuple_decode(A, B, image[t])
            except ScottkitError as exc:
                back = str(exc)
            if back != t:
                rep.fail({"kind": "tuple-decode", "tuple": list(t), "decoded": back})
    rep.details.update(k=k, source_orbits=len(set(src.values())), image_orbits=len(img_cells))
    return rep


def transfer_family(E: EmbeddingUnderTest, family: Sequence[FiniteStructure], target: FiniteStructure,
                    budgets: Budgets | None = None) -> SweepReport:
    """Per-index verdicts C_n ~ target and encode(C_n) ~ encode(target) must agree."""
    budgets = budgets or get_budgets()
    rep = SweepReport(E.name, "family-transfer", instances=len(family))
    T = E.encode(target)
    src, img = [], []
    for i, C in enumerate(family):
        a = _iso(C, target, budgets)
        b = E.images_isomorphic(E.encode(C), T)
        src.append(a)
        img.append(b)
        rep.checked += 1
        if a != b:
            rep.fail({"kind": "index", "index": i, "source_iso": a, "image_iso": b,
                      "member": C.to_json()})
    rep.details.update(source_verdicts=src, image_verdicts=img)
    return rep


# ---------------------------------------------------------------------------
# shipped embeddings and their exhaustive source families

def graph_family(n: int) -> list[FiniteStructure]:
    """One graph per isomorphism type on vertices 0..n-1, by edge count then bit pattern."""
    if n > 6:
        raise BudgetExceeded("exhaustive graph families are capped at 6 vertices")
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen, out = set(), []
    for bits in sorted(itertools.product((0, 1), repeat=len(pairs)), key=lambda b: (sum(b), b[::-1])):
        E = [p for p, b in zip(pairs, bits) if b]
        canon = min(tuple(sorted(tuple(sorted((g[u], g[v]))) for u, v in E)) for g in perms)
        if canon not in seen:
            seen.add(canon)
            out.append(make_graph(range(n), E))
    return out


def tree_family(max_nodes: int, min_nodes: int = 1) -> list[FiniteStructure]:
    return [T.to_structure() for T in rooted_trees(max_nodes, min_nodes)]


def tree_graph_embedding() -> EmbeddingUnderTest:
    return EmbeddingUnderTest(
        name="tree-graph",
        encode=encode_structure,
        decode=lambda G: decode_graph(G).to_structure(),
        images_isomorphic=lambda B, B2: isomorphic(B, B2) is not None,
        tuple_map=lambda A, B, t: tuple(node_vertex(NODE_REP_SLOT, a) for a in t),
        image_same_orbit=lambda B, s, t: isomorphic(B, B, list(zip(s, t))) is not None,
    )


def graph_field_embedding(char: int = 0) -> EmbeddingUnderTest:
    return EmbeddingUnderTest(
        name=f"graph-field(char {char})",
        encode=lambda G: build_field(G, char),
        decode=decode_field,
        images_isomorphic=presentations_isomorphic,
        tuple_map=lambda A, F, t: tuple(t),
        image_same_orbit=field_same_orbit,
    )


@dataclass(frozen=True)
class OrderImage:
    """The order image of G, exposed through fragments of bounded shape."""

    G: FiniteStructure
    L: int = 2
    H: int = 0

    def fragment(self) -> list[OrderElement]:
        return enumerate_fragment(self.G, self.L, self.H)


def decode_fragment(frag: Sequence[OrderElement]) -> FiniteStructure:
    """Read a graph off an enumerated fragment alone.

    Vertices are the classes of the one-pair left limit points; two
    distinct vertices are adjacent when the discrete block over their pair
    has the size of the edge type.
    """
    verts, blocks = set(), {}
    for x in frag:
        if x.n == 1 and x.tail == 0:
            verts.add(class_of(x.qs[0]))
        if x.n == 2:
            blocks[x.body] = blocks.get(x.body, 0) + 1
    edge_size = atomic_type_index(AtomicPattern(2, (0,), (1,))) + 1
    edges = set()
    for body, size in blocks.items():
        a, b = (class_of(q) for q in body[0::2])
        if a != b and size == edge_size:
            edges.add((min(a, b), max(a, b)))
    return make_graph(sorted(verts), sorted(edges))


def decode_order_image(I: OrderImage) -> FiniteStructure:
    return decode_fragment(I.fragment())


def graph_order_embedding(L: int = 2, H: int = 0,
                          tuple_map: Callable[[FiniteStructure, tuple], OrderElement] = f_map
                          ) -> EmbeddingUnderTest:
    return EmbeddingUnderTest(
        name="graph-order",
        encode=lambda G: OrderImage(G, L, H),
        decode=decode_order_image,
        images_isomorphic=lambda I, J: order_images_isomorphic(I.G, J.G, I.L, I.H),
        tuple_map=lambda A, I, t: tuple_map(A, t),
        image_same_orbit=lambda I, x, y: order_same_orbit(I.G, x, y, I.L, I.H),
        tuple_decode=lambda A, I, x: g_decode(A, x) if member(A, x) else None,
    )


EMBEDDINGS = {
    "tree-graph": tree_graph_embedding,
    "graph-field": graph_field_embedding,
    "graph-order": graph_order_embedding,
}
ALIASES = {"field": "graph-field", "order": "graph-order", "graph": "tree-graph"}


def source_family(embedding: str, max_size: int) -> list[FiniteStructure]:
    """Exhaustive small sources: trees or graphs with 1..max_size elements, one per iso type."""
    if embedding == "tree-graph":
        return tree_family(max_size)
    return [G for n in range(1, max_size + 1) for G in graph_family(n)]


__all__ = [
    "EmbeddingUnderTest", "SweepReport", "check_iso_preservation", "check_orbit_correspondence",
    "transfer_family", "graph_family", "tree_family", "tree_graph_embedding",
    "graph_field_embedding", "graph_order_embedding", "OrderImage", "decode_fragment",
    "decode_order_image", "EMBEDDINGS", "ALIASES", "source_family",
]
