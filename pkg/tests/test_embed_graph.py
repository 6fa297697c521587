import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import gadget_counts
from scottkit.core import AtomicDiagram, diagram, isomorphic, make_graph, orbits, structure_from_diagram
from scottkit.core import GRAPH
from scottkit.embed_graph import (
    R,
    decode_graph,
    encode_structure,
    encode_tree,
    graph_to_dot,
    node_vertex,
    tree_graph_operator,
    tree_node_vertices,
    vertex_kind,
)
from scottkit.errors import DecodeError
from scottkit.trees import FiniteTree, ordered_trees, rooted_trees

ONE = FiniteTree.of(())


def test_counts_examples():
    assert len(encode_tree(FiniteTree())) == 0
    assert len(encode_tree(ONE)) == 12
    assert len(encode_tree(FiniteTree.of((0,)))) == 24


def test_counts_match_gadget_oracle():
    for T in rooted_trees(6):
        G = encode_tree(T)
        v, e = gadget_counts(len(T))
        assert len(G) == v == 12 * len(T)
        assert len(G.relations["E"]) // 2 == e == 14 * len(T)


def test_vertex_ids_are_injective_and_deterministic():
    for T in rooted_trees(5):
        G = encode_tree(T)
        assert G == encode_tree(T)
        kinds = {vertex_kind(v) for v in G.universe}
        assert kinds == {"node-rep", "node-triangle", "succ-rep", "succ-square", "chain2", "chain3"}


def test_round_trip_up_to_five_nodes():
    for T in rooted_trees(5):
        back = decode_graph(encode_tree(T))
        assert isomorphic(back.to_structure(), T.to_structure()) is not None
    assert decode_graph(encode_tree(ONE)) == ONE
    assert decode_graph(encode_tree(FiniteTree())) == FiniteTree()


def test_decoder_rejects_non_images():
    with pytest.raises(DecodeError):
        decode_graph(make_graph(range(3), [(0, 1), (1, 2), (0, 2)]))
    G = encode_tree(FiniteTree.of((0,)))
    extra = make_graph(G.universe + (10**9,), [tuple(e) for e in G.relations["E"]])
    with pytest.raises(DecodeError):
        decode_graph(extra)
    E = sorted(G.relations["E"])
    with pytest.raises(DecodeError):
        decode_graph(make_graph(G.universe, [e for e in E if e != E[0] and e != E[0][::-1]]))


def test_iso_preservation_up_to_five_nodes():
    trees = [T for n in range(1, 6) for T in ordered_trees(n)][::3]
    images = [encode_tree(T) for T in trees]
    for i, j in itertools.combinations(range(len(trees)), 2):
        src = isomorphic(trees[i].to_structure(), trees[j].to_structure()) is not None
        assert src == (isomorphic(images[i], images[j]) is not None)


def test_orbits_on_a_three_path():
    """Root with one child with one child: no two nodes share an orbit, nor do their r-vertices."""
    T = FiniteTree.of((0, 0))
    G = encode_tree(T)
    r = tree_node_vertices(T)
    same = lambda a, b: isomorphic(G, G, [(a, b)]) is not None
    assert not any(same(r[s], r[t]) for s, t in itertools.combinations(T.nodes, 2))
    V = FiniteTree.of((0,), (1,))
    H = encode_tree(V)
    rv = tree_node_vertices(V)
    assert isomorphic(H, H, [(rv[(0,)], rv[(1,)])]) is not None


def test_operator_on_fragments():
    op = tree_graph_operator()
    assert len(op.apply(AtomicDiagram())) == 0
    A = ONE.to_structure()
    image = structure_from_diagram(GRAPH, op.apply(diagram(A)))
    assert image == encode_structure(A) and len(image) == 12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.sampled_from(ordered_trees(n))), st.data())
def test_operator_is_monotone(T, data):
    op = tree_graph_operator()
    D = diagram(T.to_structure())
    facts = sorted(D.facts)
    small = data.draw(st.sets(st.sampled_from(facts)))
    sub = AtomicDiagram(frozenset(small))
    assert op.apply(sub) <= op.apply(D)


def test_dot_output():
    dot = graph_to_dot(encode_tree(ONE))
    assert dot.startswith("graph") and "red" in dot and node_vertex(R, 0) is not None
