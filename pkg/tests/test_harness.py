import itertools

import pytest

from oracles import brute_isomorphic
from scottkit.core import make_graph
from scottkit.harness import (
    OrderImage,
    check_iso_preservation,
    check_orbit_correspondence,
    decode_fragment,
    graph_family,
    graph_field_embedding,
    graph_order_embedding,
    source_family,
    transfer_family,
    tree_family,
    tree_graph_embedding,
)
from scottkit.mutants import _short_chains, _tree_encoder
from scottkit.trees import FiniteTree
from dataclasses import replace


def test_graph_family_counts_match_brute_dedup():
    assert [len(graph_family(n)) for n in range(1, 6)] == [1, 2, 4, 11, 34]
    fam = graph_family(4)
    for G, H in itertools.combinations(fam, 2):
        assert not brute_isomorphic(G, H)


def test_tree_iso_sweep_up_to_five():
    rep = check_iso_preservation(tree_graph_embedding(), tree_family(5))
    assert rep.passed and rep.instances == 17
    assert rep.details["pairs"] == 17 * 18 // 2


def test_field_iso_sweep_four_vertices():
    for char in (0, 3, 2):
        assert check_iso_preservation(graph_field_embedding(char), graph_family(4)).passed


def test_broken_encoder_gives_counterexample():
    E = replace(tree_graph_embedding(), encode=_tree_encoder(lambda A, a, b: True, _short_chains))
    rep = check_iso_preservation(E, tree_family(3))
    assert not rep.passed and rep.counterexample["kind"] == "round-trip"


def test_orbit_examples():
    P3 = make_graph(range(3), [(0, 1), (1, 2)])
    rep = check_orbit_correspondence(graph_order_embedding(), P3, 1)
    assert rep.passed and rep.details["image_orbits"] == 2
    C3 = make_graph(range(3), [(0, 1), (1, 2), (0, 2)])
    for E in (graph_field_embedding(), graph_order_embedding()):
        rep = check_orbit_correspondence(E, C3, 1)
        assert rep.passed and rep.details["source_orbits"] == rep.details["image_orbits"] == 1


@pytest.mark.parametrize("k", [1, 2])
def test_tree_orbits(k):
    for A in tree_family(4):
        assert check_orbit_correspondence(tree_graph_embedding(), A, k).passed


def test_transfer_examples():
    chain = FiniteTree.of((0, 0)).to_structure()
    rep = transfer_family(tree_graph_embedding(), tree_family(4), chain)
    assert rep.passed and sum(rep.details["source_verdicts"]) == 1
    rep = transfer_family(tree_graph_embedding(), [chain], chain)
    assert rep.details["source_verdicts"] == rep.details["image_verdicts"] == [True]
    K3 = make_graph(range(3), [(0, 1), (1, 2), (0, 2)])
    fam = [G for n in (2, 3, 4) for G in graph_family(n)]
    rep = transfer_family(graph_field_embedding(), fam, K3)
    assert rep.passed and sum(rep.details["image_verdicts"]) == 1


def test_fragment_decoder():
    for G in graph_family(3) + graph_family(4):
        assert decode_fragment(OrderImage(G).fragment()) == G


def test_report_json_shape():
    rep = check_iso_preservation(tree_graph_embedding(), tree_family(2))
    data = rep.to_json()
    assert set(data) >= {"embedding", "property", "passed", "instances", "checked", "failures", "counterexample"}


def test_source_family_kinds():
    assert len(source_family("tree-graph", 4)) == 8
    assert len(source_family("graph-field", 3)) == 1 + 2 + 4
