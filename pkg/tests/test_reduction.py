import pytest

from seqgram.corpus import (
    chain2, chain_with_cut, double_contraction, drinker_cutfree,
    drinker_with_cut, lit, quantifier_free_cut, stacked_cuts, top_bot_cut,
)
from seqgram.extraction import extract_grammar, herbrand_content, proof_language
from seqgram.grammars import eliminate_nonterminal
from seqgram.herbrand import canonical_rename, instances_of
from seqgram.proofs import (
    ax, check_wellformed, cont, cut, cut_nodes, exists_intro, forall_intro,
    herbrand_multiset, herbrand_set, is_regular, is_simple, weak,
)
from seqgram.reduction import (
    Redex, StaleRedex, Strategy, apply_step, find_redexes, iter_reduction,
    reduce_proof,
)
from seqgram.syntax import T, V, leq_formula_set, var
from seqgram.tautology import is_tautology

POLICIES = ("leftmost-innermost", "leftmost-outermost", "rightmost-uppermost")


def nonerasing_strategies():
    return [Strategy(p) for p in POLICIES] + [
        Strategy("random", seed=101), Strategy("random", seed=202)]


def _rename_start(pg):
    g = pg.grammar
    sub = {g.start: var("S0")}
    out = set()
    for lhs, rhs in g.productions:
        from seqgram.syntax import subst_term, Subst, Term
        lhs2 = var("S0") if lhs == g.start else lhs
        out.add((lhs2, rhs))
    return out


# --- redex enumeration --------------------------------------------------------

def test_cutfree_has_no_redexes():
    assert find_redexes(drinker_cutfree(), "full") == []
    assert find_redexes(chain2(), "noerase") == []


def test_axiom_redex_found():
    rs = find_redexes(quantifier_free_cut(), "full")
    assert {r.kind for r in rs} == {"axiom"}
    assert len(rs) == 2  # both premises are axioms


def test_weakening_redex_mode():
    p = top_bot_cut()
    full = find_redexes(p, "full")
    assert any(r.kind == "weakening" for r in full)
    noerase = find_redexes(p, "noerase")
    assert noerase == []  # stuck: the cut is a non-erasing normal form


def test_contraction_redexes():
    rs = find_redexes(double_contraction(), "noerase")
    assert {(r.kind, r.side) for r in rs} == {("contraction", 0), ("contraction", 1)}


def test_not_simple_rejected():
    from seqgram.parsing import parse_formula
    from seqgram.syntax import dual
    inner = parse_formula("(ex z (all w R(z,w)))")
    l = weak(ax(lit("P", T("c"))), inner)
    r = weak(ax(lit("Q", T("c"))), dual(inner))
    p = cut(l, r, 2, 2)
    with pytest.raises(Exception):
        find_redexes(p, "full")


# --- single steps ----------------------------------------------------------------

def test_axiom_step():
    p = quantifier_free_cut()
    rs = find_redexes(p, "full")
    q = apply_step(p, rs[0])
    assert check_wellformed(q) is None
    assert sorted(map(repr, q.sequent)) == sorted(map(repr, p.sequent))
    assert find_redexes(q, "full") == []


def test_stale_redex():
    p = quantifier_free_cut()
    rs = find_redexes(p, "full")
    q = apply_step(p, rs[0])
    with pytest.raises(StaleRedex):
        apply_step(q, Redex((), "axiom", 0))


def test_quantifier_step_drinker():
    p = drinker_with_cut()
    # permute until the quantifier redex fires, checking every intermediate
    current = p
    for _ in range(20):
        rs = find_redexes(current, "noerase")
        if not rs:
            break
        quant = [r for r in rs if r.kind == "quantifier"]
        r = quant[0] if quant else rs[0]
        if quant:
            before = extract_grammar(current)
            after_proof = apply_step(current, r)
            # the grammar loses the eliminated nonterminal
            node = None
            from seqgram.proofs import subproof_at, cut_eigenvariable
            alpha = cut_eigenvariable(current, r.locator)
            t = subproof_at(current, r.locator).premises[0].witness
            expect = eliminate_nonterminal(before.grammar, alpha)
            got = extract_grammar(after_proof)
            def norm(g, start):
                return {(var("S0") if l == start else l, rr) for l, rr in g.productions}
            assert norm(got.grammar, got.grammar.start) == norm(expect, expect.start)
            current = after_proof
        else:
            current = apply_step(current, r)
        assert check_wellformed(current) is None
        assert is_simple(current) is True


def test_forced_followup_preserves_simplicity():
    """A cut permuted into the universal side of a quantified cut must carry
    the displaced universal inference down with it."""
    av, bv, w = V("av"), V("bv"), T("w1")
    t0 = T("t0")
    # cut_alpha on (ex u ~Q(u)) whose right side also carries (ex z ~R(z))
    psi2 = ax(lit("R", w))
    psi2 = exists_intro(psi2, 1, w)                    # R(w1), ex z ~R(z)
    psi2 = weak(psi2, lit("Q", av))                    # R(w1), ex z ~R(z), Q(av)
    alln = forall_intro(psi2, 2, var("av"))            # R(w1), ex z ~R(z), all u Q(u)
    left_a = ax(lit("Q", t0))
    left_a = exists_intro(left_a, 1, t0)               # Q(t0), ex u ~Q(u)
    cut_a = cut(left_a, alln, 1, 2)                    # Q(t0), R(w1), ex z ~R(z)
    psi3 = ax(lit("R", bv))
    psi3 = exists_intro(psi3, 1, bv)                   # R(bv), ex z ~R(z)
    psi3 = forall_intro(psi3, 0, var("bv"))            # all z R(z), ex z ~R(z)
    p = cut(cut_a, psi3, 2, 0)                         # Q(t0), R(w1), ex z ~R(z)
    assert check_wellformed(p) is None
    assert is_simple(p) is True
    rs = [r for r in find_redexes(p, "noerase")
          if r.kind == "binary-perm" and r.locator == ()]
    assert rs and rs[0].branch == 1
    q = apply_step(p, rs[0])
    assert check_wellformed(q) is None
    assert is_simple(q) is True                        # needs the forced follow-up
    assert sorted(map(repr, q.sequent)) == sorted(map(repr, p.sequent))
    # the outer cut's universal side ends with the universal inference again
    [(loc, n)] = [(loc, n) for loc, n in cut_nodes(q) if loc == ()]
    from seqgram.syntax import Ex
    side = 1 if isinstance(n.premises[0].sequent[n.aux[0]], Ex) else 0
    assert n.premises[side].rule == "all"


# --- full runs -------------------------------------------------------------------

@pytest.mark.parametrize("build", [drinker_with_cut, chain_with_cut,
                                   stacked_cuts, quantifier_free_cut])
def test_step_preservation(build):
    p = build()
    for before, r, after, perm in iter_reduction(p, Strategy("leftmost-innermost"),
                                                 "noerase"):
        assert check_wellformed(after) is None, r
        assert is_regular(after)
        assert is_simple(after) is True
        # the end-sequent is preserved as a multiset, tracked by the permutation
        for m, f in enumerate(before.sequent):
            assert after.sequent[perm[m]] == f, r


@pytest.mark.parametrize("policy", POLICIES)
def test_drinker_cut_normalizes(policy):
    p = drinker_with_cut()
    nf, trace = reduce_proof(p, Strategy(policy), "noerase")
    assert trace.status == "normal-form"
    assert find_redexes(nf, "noerase") == []
    assert is_tautology(herbrand_set(nf))
    # Herbrand confluence: the normal form's renamed instances equal the content
    got = canonical_rename(instances_of(nf))
    assert got == herbrand_content(p)


def capped_steps(p, strat, mode):
    """Iterate reduction steps, stopping quietly at budget or cycles."""
    from seqgram.reduction import _BudgetExhausted, _CycleDetected
    try:
        yield from iter_reduction(p, strat, mode)
    except (_BudgetExhausted, _CycleDetected):
        return


def test_language_invariance_nonerasing_runs():
    for build in (drinker_with_cut, chain_with_cut, stacked_cuts,
                  double_contraction):
        p = build()
        lang0 = proof_language(p)
        strategies = nonerasing_strategies() if build is not double_contraction \
            else [Strategy("random", seed=s, budget=150) for s in (0, 1, 2)]
        for strat in strategies:
            for before, r, after, _perm in capped_steps(p, strat, "noerase"):
                assert proof_language(after) == lang0, (r, strat)


def test_grammar_verbatim_for_structural_steps():
    # axiom, propositional and permutation steps leave the grammar unchanged
    for build in (drinker_with_cut, chain_with_cut, stacked_cuts):
        p = build()
        for before, r, after, _perm in iter_reduction(p, Strategy("leftmost-outermost"),
                                               "noerase"):
            if r.kind in ("axiom", "propositional", "unary-perm", "binary-perm"):
                assert _rename_start(extract_grammar(before)) == \
                    _rename_start(extract_grammar(after)), r


def test_contraction_step_language_equality():
    p = double_contraction()
    seen_contraction = False
    for before, r, after, _perm in capped_steps(
            p, Strategy("random", seed=1, budget=100), "noerase"):
        if r.kind == "contraction":
            seen_contraction = True
            assert proof_language(before) == proof_language(after)
    assert seen_contraction


def test_weakening_step_language_leq():
    p = top_bot_cut()
    rs = [r for r in find_redexes(p, "full") if r.kind == "weakening"]
    assert rs
    q = apply_step(p, rs[0])
    assert check_wellformed(q) is None
    assert leq_formula_set(proof_language(q), proof_language(p))


def test_double_contraction_noerase_confluent():
    # normal forms of different sizes, same Herbrand set = the content
    p = double_contraction()
    content = herbrand_content(p)
    multisets = []
    for seed in (3, 5, 6, 10):
        nf, trace = reduce_proof(p, Strategy("random", seed=seed, budget=400),
                                 "noerase")
        assert trace.status == "normal-form"
        assert is_tautology(herbrand_set(nf))
        assert canonical_rename(instances_of(nf)) == content
        multisets.append(tuple(sorted(herbrand_multiset(nf).items(), key=repr)))
    assert len(set(multisets)) > 1  # genuinely different proofs, same set


def test_full_mode_normal_forms_cutfree():
    cases = [
        (drinker_with_cut, Strategy("leftmost-innermost")),
        (chain_with_cut, Strategy("leftmost-innermost")),
        (stacked_cuts, Strategy("leftmost-innermost")),
        (double_contraction, Strategy("scripted", script=(0,), seed=5, budget=400)),
        (top_bot_cut, Strategy("leftmost-innermost")),
        (quantifier_free_cut, Strategy("leftmost-innermost")),
    ]
    for build, strat in cases:
        p = build()
        nf, trace = reduce_proof(p, strat, "full")
        assert trace.status == "normal-form", build.__name__
        assert cut_nodes(nf) == []


def test_noerase_normal_form_may_keep_cuts():
    p = top_bot_cut()
    nf, trace = reduce_proof(p, Strategy("leftmost-innermost"), "noerase")
    assert trace.status == "normal-form"
    assert len(cut_nodes(nf)) == 1


def test_budget_exhaustion_status():
    p = double_contraction()
    nf, trace = reduce_proof(p, Strategy("leftmost-innermost", budget=1), "noerase")
    assert trace.status == "budget-exhausted"
    assert len(trace.steps) >= 1


def test_full_mode_multiset_divergence():
    """Two erasing strategies produce normal forms with different Herbrand
    multisets whose sets are both below the content."""
    p = double_contraction()
    content = herbrand_content(p)
    results = []
    for script in [(0,), (1,)]:
        nf, trace = reduce_proof(
            p, Strategy("scripted", script=script, seed=5, budget=400), "full")
        assert trace.status == "normal-form"
        hs = herbrand_set(nf)
        assert leq_formula_set(hs, content)
        results.append(herbrand_multiset(nf))
    assert results[0] != results[1]


def test_reduce_deterministic():
    p = stacked_cuts()
    nf1, t1 = reduce_proof(p, Strategy("random", seed=7), "noerase")
    nf2, t2 = reduce_proof(p, Strategy("random", seed=7), "noerase")
    assert nf1 == nf2 and t1 == t2
