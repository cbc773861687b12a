"""Acceptance suite: one test per criterion, in order.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS lines.  The proof corpus is the fixture set plus fifty generated simple
proofs (seeds 1..50).  Reduction runs carry a step budget of 100000 and a
proof-size cap that turns divergent runs (the rewrite system is not strongly
normalizing) into budget-exhausted outcomes quickly.
"""

import random

import pytest

from seqgram.corpus import fixtures, lit
from seqgram.extraction import extract_grammar, herbrand_content, proof_language
from seqgram.generate import (GeneratorConfig, generate_proof, random_grammar,
                              random_rigid_derivations)
from seqgram.grammars import (check_rigidity, compute_language,
                              compute_regular_language, derigidify,
                              eliminate_nonterminal, grammar, is_acyclic, nt,
                              regular_language_size, replay)
from seqgram.harness import (confluence_check, content_disjunction_check,
                             default_strategies, normal_form_content)
from seqgram.herbrand import (Instance, InstanceSet, canonical_rename,
                              dependency, deskolemize_instances, instances_of,
                              is_herbrand_disjunction, parse_instances,
                              skolemize_instances, skolemize_proof,
                              skolemize_sequent)
from seqgram.parsing import parse_formula
from seqgram.proofs import (cut_nodes, herbrand_multiset, herbrand_set,
                            proofs_equal_canonical)
from seqgram.reduction import (Strategy, apply_step, find_redexes,
                               iter_reduction, reduce_proof,
                               _BudgetExhausted, _CycleDetected)
from seqgram.syntax import (Symbol, T, Term, V, formula_str, is_weak,
                            leq_formula_set, apply_subst)
from seqgram.tautology import is_tautology

from oracles import brute_rigid_language

BUDGET = 100_000
SIZE_CAP = 600

_collected_contents: list = []   # (content, sequent) pairs checked by criterion 8


@pytest.fixture(scope="module")
def corpus():
    entries = [(e.name, e.proof(), e.tags) for e in fixtures()]
    for seed in range(1, 51):
        shape = "weak" if seed % 2 else "general"
        p = generate_proof(GeneratorConfig(seed=seed, shape=shape))
        tags = ("weak-sequent",) if is_weak(p.sequent) else ("general",)
        entries.append((f"gen{seed}", p, tags))
    return entries


def _capped(it):
    try:
        yield from it
    except (_BudgetExhausted, _CycleDetected):
        return


def test_criterion_1_herbrand_confluence(corpus):
    """Every non-erasing run reaching a normal form yields the same renamed
    Herbrand set, equal to the proof's Herbrand content."""
    assert len(corpus) >= 60
    assert sum(1 for _ in fixtures()) >= 10
    conclusive = 0
    inconclusive_names = []
    for name, p, _tags in corpus:
        report = confluence_check(
            p, default_strategies(k=5, budget=BUDGET, size_cap=SIZE_CAP))
        assert report.verdict != "mismatch", (name, report.to_json())
        if report.verdict == "confluent":
            conclusive += 1
            _collected_contents.append(
                ({parse_formula(s) for s in report.expected}, p.sequent))
        else:
            inconclusive_names.append(name)
    assert conclusive >= len(corpus) - 2, inconclusive_names
    print(f"\nACCEPTANCE 1 (Herbrand confluence): PASS — "
          f"{conclusive}/{len(corpus)} proofs conclusive over 5 strategies"
          + (f" (no normal form reached: {inconclusive_names})"
             if inconclusive_names else ""))


def _weakened_cut_proofs():
    """Cuts whose existential side is weakening-introduced: stuck under
    non-erasing reduction, reducible only by the weakening step."""
    from seqgram.proofs import ax, cut, exists_intro, forall_intro, weak
    from seqgram.syntax import var
    gamma = V("g1")
    l = weak(ax(lit("Q", T("c"))), parse_formula("(ex z ~R(z))"))
    r = ax(lit("R", gamma))
    r = exists_intro(r, 1, gamma)
    r = forall_intro(r, 0, var("g1"))
    one = cut(l, r, 2, 0)
    delta = V("g2")
    l2 = ax(lit("R", delta))
    l2 = exists_intro(l2, 1, delta)
    l2 = forall_intro(l2, 0, var("g2"))
    r2 = weak(ax(lit("Q", T("d"))), parse_formula("(ex z ~R(z))"))
    two = cut(r2, l2, 2, 0)
    return [("weakened_cut_left", one), ("weakened_cut_right", two)]


def test_criterion_2_step_local_invariance(corpus):
    """On weak-sequent proofs, every non-erasing step preserves the grammar
    language exactly; every weakening step may only shrink it along <=."""
    steps_checked = 0
    weakening_steps = 0
    extra = [(n, p, ("weak-sequent",)) for n, p in _weakened_cut_proofs()]
    for name, p, tags in list(corpus) + extra:
        if not is_weak(p.sequent):
            continue
        lang0 = proof_language(p)
        strategies = default_strategies(k=5, budget=300, size_cap=SIZE_CAP)
        for strat in strategies:
            for _, r, after, _perm in _capped(iter_reduction(p, strat, "noerase")):
                assert proof_language(after) == lang0, (name, strat, r)
                steps_checked += 1
        # erasing runs to exercise the weakening inequality
        for seed in (7, 11):
            current = p
            for _, r, after, _perm in _capped(iter_reduction(
                    p, Strategy("random", seed=seed,
                                budget=300, size_cap=SIZE_CAP), "full")):
                la, lb = proof_language(after), proof_language(current)
                if r.kind == "weakening":
                    weakening_steps += 1
                    assert leq_formula_set(la, lb), (name, r)
                else:
                    assert la == lb, (name, r)
                current = after
                steps_checked += 1
    assert steps_checked > 500
    assert weakening_steps > 0
    print(f"\nACCEPTANCE 2 (step-local invariance): PASS — "
          f"{steps_checked} steps checked, {weakening_steps} weakening steps")


def test_criterion_3_grammar_lemmas():
    """Random totally rigid acyclic grammars: the substitution-product
    language equals brute-force rigid derivation enumeration; derivation
    normalization and non-terminal elimination behave as stated."""
    rng = random.Random(42)
    grammars = 0
    derivations = 0
    eliminations = 0
    while grammars < 200:
        g = random_grammar(rng)
        grammars += 1
        assert compute_language(g) == brute_rigid_language(g)
        for d in random_rigid_derivations(g, limit=8):
            from seqgram.grammars import normalize_derivation
            out = normalize_derivation(g, d)
            assert replay(g, out)[-1] == replay(g, d)[-1]
            assert check_rigidity(g, out) is None
            for b in g.rigid:
                assert len({s.production for s in out.steps
                            if s.production[0] == b}) <= 1
            derivations += 1
        for b in sorted(g.nonterminals, key=lambda s: s.name):
            if b != g.start and len(g.productions_of(b)) == 1:
                assert compute_language(eliminate_nonterminal(g, b)) == \
                    compute_language(g)
                eliminations += 1
                break
    assert derivations > 200 and eliminations > 50
    print(f"\nACCEPTANCE 3 (grammar lemmas): PASS — {grammars} grammars, "
          f"{derivations} derivations normalized, {eliminations} eliminations")


def test_criterion_4_grammar_acyclicity(corpus):
    for name, p, _tags in corpus:
        pg = extract_grammar(p)
        assert is_acyclic(pg.grammar), name
    print(f"\nACCEPTANCE 4 (acyclicity of proof grammars): PASS — "
          f"{len(corpus)} proofs")


def _drinker_paper_instances():
    F = parse_formula("(ex x (or ~P(x) (all y P(y))))")
    a, b = V("alpha"), V("beta")
    return InstanceSet((F,), (
        Instance(1, parse_formula("(or ~P(c) P(alpha))", {"alpha"}), ((1, T("c")), (2, a))),
        Instance(1, parse_formula("(or ~P(alpha) P(beta))", {"alpha", "beta"}),
                 ((1, a), (2, b))),
    ))


def _two_conjunct_paper_instances():
    f1 = parse_formula("(ex x (all y (or ~P(x,y) ~Q(x,y))))")
    f2 = parse_formula("(and (ex x P(c,x)) (ex x Q(c,x)))")
    mk = lambda s: parse_formula(s, {"alpha", "beta"})  # noqa: E731
    a, b, c = V("alpha"), V("beta"), T("c")
    return InstanceSet((f1, f2), (
        Instance(1, mk("(or ~P(c,alpha) ~Q(c,alpha))"), ((1, c), (2, a))),
        Instance(1, mk("(or ~P(c,beta) ~Q(c,beta))"), ((1, c), (2, b))),
        Instance(2, mk("(and P(c,alpha) Q(c,beta))"), ((1, a), (2, b))),
    ))


def test_criterion_5_skolemization_suite(corpus):
    """Skolemization commutes with reduction steps, with grammar languages,
    and deskolemization after skolemization is the canonical renaming."""
    # (6.1) step mirroring on every corpus fixture reduction
    mirrored = 0
    identity_steps = 0
    for e in fixtures():
        p = e.proof()
        strat = Strategy("random", seed=5, budget=60, size_cap=SIZE_CAP)
        for before, r, after, _perm in _capped(iter_reduction(p, strat, "noerase")):
            skb = skolemize_proof(before)[0]
            ska = skolemize_proof(after)[0]
            if proofs_equal_canonical(skb, ska):
                identity_steps += 1
                continue
            ok = False
            for r2 in find_redexes(skb, "full"):
                if proofs_equal_canonical(apply_step(skb, r2), ska):
                    ok = True
                    break
            assert ok, (e.name, r)
            mirrored += 1
    assert mirrored > 10
    # (6.2) language commutation on every corpus proof
    for name, p, _tags in corpus:
        skp, _, sigma = skolemize_proof(p)
        assert proof_language(skp) == \
            {apply_subst(f, sigma) for f in proof_language(p)}, name
    # (6.5) on the worked instance sets
    for I in (_drinker_paper_instances(), _two_conjunct_paper_instances()):
        seq = I.sequent
        sk_seq, skmap = skolemize_sequent(seq)
        assert is_herbrand_disjunction(I) is True
        skI = skolemize_instances(I, skmap)
        assert is_herbrand_disjunction(parse_instances(skI, sk_seq)) is True   # 6.5(1)
        desk = deskolemize_instances(skI, skmap)
        assert is_herbrand_disjunction(parse_instances(desk, seq)) is True     # 6.5(2)
        renamed = canonical_rename(I)                                          # 6.5(3)
        assert sorted(map(formula_str, desk)) == sorted(map(formula_str, renamed))
        _collected_contents.append((desk, seq))
    print(f"\nACCEPTANCE 5 (skolemization suite): PASS — {mirrored} mirrored "
          f"steps, {identity_steps} identity steps, byte-equal renamings")


def test_criterion_6_quantitative_spot_checks():
    # the n=2 regular grammar has exactly n^(n^n) = 16 terms
    a0, a1, a2 = nt("q0"), nt("q1"), nt("q2")
    f2 = Symbol("f", 2)
    g = grammar(a0, [(a0, Term(f2, (Term(a1), Term(a1)))),
                     (a1, Term(f2, (Term(a2), Term(a2)))),
                     (a2, T("c1")), (a2, T("c2"))])
    reg = compute_regular_language(derigidify(g))
    assert len(reg) == 16
    assert regular_language_size(derigidify(g)) == 16

    # the drinker tables and dependency relation, exactly as worked out
    from seqgram.corpus import drinker_cutfree
    I = instances_of(drinker_cutfree())
    assert I.entry(1, 1, 1) == T("c")
    assert I.entry(1, 1, 2) == V("alpha")
    assert I.entry(1, 2, 1) == V("alpha")
    assert I.entry(1, 2, 2) == V("beta")
    dep = dependency(I)
    assert ((1, 1, 1), (1, 1, 2)) in dep.precedes
    assert ((1, 1, 2), (1, 1, 1)) not in dep.precedes
    assert dep.acyclic()

    # skolemizing the two-conjunct instances collapses three to two
    I2 = _two_conjunct_paper_instances()
    skI2 = skolemize_instances(I2)
    assert len(skI2) == 2 < len(I2.instances)
    print("\nACCEPTANCE 6 (quantitative spot checks): PASS — |regular|=16, "
          "drinker tables exact, |sk(I)|=2")


def test_criterion_7_nonconfluence_witness():
    """Full (erasing) reduction of the double-contraction fixture: two
    scripted strategies reach normal forms with different Herbrand multisets;
    both sets sit below the content."""
    from seqgram.corpus import double_contraction
    p = double_contraction()
    content = herbrand_content(p)
    multisets = []
    for script in [(0,), (1,)]:
        nf, trace = reduce_proof(
            p, Strategy("scripted", script=script, seed=5, budget=BUDGET,
                        size_cap=SIZE_CAP), "full")
        assert trace.status == "normal-form"
        renamed = normal_form_content(nf, trace, p.sequent)
        assert leq_formula_set(renamed, content)
        _collected_contents.append((renamed, p.sequent))
        multisets.append(tuple(sorted(herbrand_multiset(nf).items(), key=repr)))
    assert multisets[0] != multisets[1]
    # non-erasing runs restore set-level agreement on the very same fixture
    for seed in (3, 5):
        nf, trace = reduce_proof(p, Strategy("random", seed=seed, budget=BUDGET,
                                             size_cap=SIZE_CAP), "noerase")
        assert trace.status == "normal-form"
        assert normal_form_content(nf, trace, p.sequent) == content
    print("\nACCEPTANCE 7 (non-confluence witness): PASS — multisets "
          f"{dict(multisets[0])} vs {dict(multisets[1])}, both <= content")


def test_criterion_8_contents_are_herbrand_disjunctions():
    assert len(_collected_contents) > 50
    for content, seq in _collected_contents:
        I = parse_instances(content, seq)
        assert is_herbrand_disjunction(I) is True
        assert is_tautology({i.matrix for i in I.instances})
    print(f"\nACCEPTANCE 8 (contents are Herbrand disjunctions): PASS — "
          f"{len(_collected_contents)} contents validated")
