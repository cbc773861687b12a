"""Property checks over generated proofs."""

import pytest

from seqgram.generate import GeneratorConfig, generate_proof
from seqgram.herbrand import instances_of, is_herbrand_disjunction
from seqgram.proofs import (cut_eigenvariable, cut_nodes, eigenvariables,
                            herbrand_set, is_regular, is_simple)
from seqgram.syntax import is_weak, quantifier_free
from seqgram.tautology import is_tautology


def proofs(shapes=("weak", "general"), seeds=range(1, 16), **kw):
    for shape in shapes:
        for seed in seeds:
            yield generate_proof(GeneratorConfig(seed=seed, shape=shape, **kw))


def test_simple_implies_regular():
    for p in proofs():
        assert is_simple(p) is True
        assert is_regular(p)


def test_cut_eigenvariable_bijection():
    # the cut eigenvariables are exactly the eigenvariables recoverable from
    # the quantified cuts, one per cut
    for p in proofs():
        _, evc = eigenvariables(p)
        per_cut = [cut_eigenvariable(p, loc) for loc, _ in cut_nodes(p)]
        named = [v for v in per_cut if v is not None]
        assert len(named) == len(set(named))
        assert set(named) == evc


def test_weak_proofs_have_only_cut_eigenvariables():
    for p in proofs(shapes=("weak",)):
        ev, evc = eigenvariables(p)
        assert ev == evc


def test_cutfree_weak_herbrand_sets_are_tautologies():
    for p in proofs(shapes=("weak",), max_cuts=0):
        assert cut_nodes(p) == []
        hs = herbrand_set(p)
        assert all(quantifier_free(f) for f in hs)
        assert is_tautology(hs)
        assert len(hs) >= 1


def test_cutfree_instances_are_herbrand_disjunctions():
    # with cuts present the end-sequent instances need not be tautological;
    # that is exactly what cut elimination restores
    for p in proofs(seeds=range(1, 11), max_cuts=0):
        assert is_herbrand_disjunction(instances_of(p)) is True
