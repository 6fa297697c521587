import pytest

from scottkit.mutants import caught, mutants

MUTANTS = mutants()


def test_at_least_six_mutants_across_all_embeddings():
    assert len(MUTANTS) >= 6
    assert {m.name.split("/")[0] for m in MUTANTS} == {"tree-graph", "graph-field", "graph-order"}


@pytest.mark.parametrize("mutant", MUTANTS, ids=[m.name for m in MUTANTS])
def test_mutant_is_caught(mutant):
    hit, report = caught(mutant)
    assert hit and report["counterexample"] is not None
