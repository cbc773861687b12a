import random

import pytest

from seqgram.grammars import (
    Derivation, GrammarError, LanguageCapExceeded, Step, check_rigidity,
    compute_language, compute_regular_language, count_rigidity_violations,
    derigidify, eliminate_nonterminal, find_paths, grammar, is_acyclic,
    normalize_derivation, nt, parse_grammar, print_grammar, reachability,
    regular_language_size, replay,
)
from seqgram.generate import random_grammar, random_rigid_derivations
from seqgram.syntax import Symbol, Term, T

from oracles import brute_rigid_language, brute_regular_language

theta, alpha, beta, gamma = nt("theta"), nt("alpha"), nt("beta"), nt("gamma")
ZERO = T("0")
ONE = T("1")


def s(t):
    return T("s", t)


def f(a, b):
    return T("f", a, b)


def g0():
    # theta -> f(alpha,alpha); alpha -> 0 | s(0)
    return grammar(theta, [(theta, f(Term(alpha), Term(alpha))),
                           (alpha, ZERO), (alpha, s(ZERO))])


# --- rigidity ---------------------------------------------------------------

def deriv(*steps):
    return Derivation(theta, tuple(Step(p, pr) for p, pr in steps))


def test_rigidity_ok():
    g = g0()
    d = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
              ((1,), (alpha, ZERO)), ((2,), (alpha, ZERO)))
    assert replay(g, d)[-1] == f(ZERO, ZERO)
    assert check_rigidity(g, d) is None


def test_rigidity_violation():
    g = g0()
    d = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
              ((1,), (alpha, ZERO)), ((2,), (alpha, s(ZERO))))
    v = check_rigidity(g, d)
    assert v is not None and v.beta == alpha and {v.p, v.q} == {(1,), (2,)}
    # brute force: no rigid derivation of g0 yields f(0, s(0))
    assert f(ZERO, s(ZERO)) not in brute_rigid_language(g)


def test_rigidity_vacuous_without_rigid_nonterminals():
    g = g0()
    g = grammar(theta, g.productions, rigid=set())
    d = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
              ((1,), (alpha, ZERO)), ((2,), (alpha, s(ZERO))))
    assert check_rigidity(g, d) is None


# --- violation counting ------------------------------------------------------

def test_violation_counts():
    g = g0()
    ok = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
               ((1,), (alpha, ZERO)), ((2,), (alpha, ZERO)))
    counts, total = count_rigidity_violations(g, ok)
    assert total == 0
    bad = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
                ((1,), (alpha, ZERO)), ((2,), (alpha, s(ZERO))))
    counts, total = count_rigidity_violations(g, bad)
    assert counts[alpha] == 2 and total == 2  # ordered pairs


def test_violation_single_position():
    g = grammar(theta, [(theta, s(Term(alpha))), (alpha, ZERO)])
    d = deriv(((), (theta, s(Term(alpha)))), ((1,), (alpha, ZERO)))
    counts, total = count_rigidity_violations(g, d)
    assert total == 0


# --- normalization -----------------------------------------------------------

def test_normalize_single_production_unchanged():
    g = g0()
    d = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
              ((1,), (alpha, ZERO)), ((2,), (alpha, ZERO)))
    assert normalize_derivation(g, d) == d


def test_normalize_merges_equal_choices():
    # alpha twice, derived s(0) once via s(beta) and once via s(gamma):
    # two distinct alpha-productions, rigid-valid, must collapse to one.
    g = grammar(theta, [(theta, f(Term(alpha), Term(alpha))),
                        (alpha, s(Term(beta))), (alpha, s(Term(gamma))),
                        (beta, ZERO), (gamma, ZERO)])
    d = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
              ((1,), (alpha, s(Term(beta)))), ((1, 1), (beta, ZERO)),
              ((2,), (alpha, s(Term(gamma)))), ((2, 1), (gamma, ZERO)))
    assert check_rigidity(g, d) is None
    out = normalize_derivation(g, d)
    assert replay(g, out)[-1] == replay(g, d)[-1]
    used = {st.production for st in out.steps if st.production[0] == alpha}
    assert len(used) == 1
    assert check_rigidity(g, out) is None


def test_normalize_rejects_invalid():
    g = g0()
    d = deriv(((), (theta, f(Term(alpha), Term(alpha)))),
              ((1,), (alpha, ZERO)), ((2,), (alpha, s(ZERO))))
    with pytest.raises(GrammarError):
        normalize_derivation(g, d)


# --- elimination -------------------------------------------------------------

def test_eliminate_simple():
    g = grammar(theta, [(theta, f(Term(beta), Term(beta))), (beta, ZERO)])
    g2 = eliminate_nonterminal(g, beta)
    assert g2.productions == ((theta, f(ZERO, ZERO)),)
    assert compute_language(g) == compute_language(g2) == {f(ZERO, ZERO)}


def test_eliminate_preserves_language():
    g = grammar(theta, [(theta, f(Term(beta), Term(gamma))),
                        (beta, T("g1", Term(gamma))),
                        (gamma, ZERO), (gamma, ONE)])
    g2 = eliminate_nonterminal(g, beta)
    expect = {f(T("g1", ZERO), ZERO), f(T("g1", ONE), ONE)}
    assert brute_rigid_language(g) == expect
    assert brute_rigid_language(g2) == expect
    assert compute_language(g) == compute_language(g2) == expect


def test_eliminate_requires_single_production():
    g = g0()
    with pytest.raises(GrammarError):
        eliminate_nonterminal(g, alpha)
    with pytest.raises(GrammarError):
        eliminate_nonterminal(g, theta)


# --- reachability / acyclicity ----------------------------------------------

def test_reachability():
    g = grammar(theta, [(theta, f(Term(alpha), Term(alpha))), (alpha, ZERO)])
    r1, rplus, rstar = reachability(g)
    assert r1 == {(theta, alpha)}
    assert (theta, alpha) in rplus and (theta, theta) in rstar
    assert is_acyclic(g)


def test_cyclic():
    g = grammar(alpha, [(alpha, T("g1", Term(alpha)))])
    r1, rplus, _ = reachability(g)
    assert (alpha, alpha) in rplus
    assert not is_acyclic(g)


def test_empty_productions():
    g = grammar(theta, [], nonterminals={theta})
    r1, rplus, _ = reachability(g)
    assert r1 == set() and rplus == set()
    assert is_acyclic(g)
    assert compute_language(g) == set()


# --- languages ----------------------------------------------------------------

def test_rigid_language_g0():
    g = g0()
    expect = {f(ZERO, ZERO), f(s(ZERO), s(ZERO))}
    assert brute_rigid_language(g) == expect
    assert compute_language(g) == expect


def test_singleton_language():
    g = grammar(theta, [(theta, T("A"))])
    assert compute_language(g) == {T("A")}
    assert compute_regular_language(g) == {T("A")}


def test_regular_language_g0():
    g = g0()
    reg = compute_regular_language(derigidify(g))
    assert len(reg) == 4
    assert compute_language(g) < reg


def _proposition_grammar(n):
    """a0 -> f(a1,...,a1); ...; a_{n-1} -> f(a_n,...,a_n); a_n -> c1|...|cn."""
    nts = [nt(f"a{i}") for i in range(n + 1)]
    prods = []
    for i in range(n):
        prods.append((nts[i], Term(Symbol("f", n),
                                   tuple(Term(nts[i + 1]) for _ in range(n)))))
    for j in range(1, n + 1):
        prods.append((nts[n], T(f"c{j}")))
    return grammar(nts[0], prods)


def test_proposition_n2_regular_16():
    g = _proposition_grammar(2)
    reg = compute_regular_language(derigidify(g))
    assert len(reg) == 16  # n^(n^n) for n=2
    assert regular_language_size(derigidify(g)) == 16
    assert brute_regular_language(g) == reg


def test_proposition_n2_rigid_2():
    g = _proposition_grammar(2)
    lang = compute_language(g)
    assert len(lang) == 2
    assert lang == brute_rigid_language(g)


def test_language_cap():
    g = _proposition_grammar(3)
    assert regular_language_size(derigidify(g)) == 3**27
    with pytest.raises(LanguageCapExceeded):
        compute_regular_language(derigidify(g), cap=1000)


# --- paths ---------------------------------------------------------------------

def test_find_paths():
    g = grammar(theta, [(theta, f(Term(alpha), Term(alpha))), (alpha, ZERO)])
    ps = find_paths(g, theta)
    reprs = {tuple(p.productions) for p in ps}
    assert reprs == {((theta, f(Term(alpha), Term(alpha))),),
                     ((theta, f(Term(alpha), Term(alpha))), (alpha, ZERO))}
    assert find_paths(g, alpha, to=theta) == []
    ends = find_paths(g, theta, to=ZERO)
    assert len(ends) == 1 and len(ends[0]) == 2


def test_paths_cyclic_rejected():
    g = grammar(alpha, [(alpha, T("g1", Term(alpha)))])
    with pytest.raises(GrammarError):
        find_paths(g, alpha)


# --- text format -----------------------------------------------------------------

def test_grammar_roundtrip():
    g = g0()
    text = print_grammar(g)
    assert parse_grammar(text) == g
    assert print_grammar(parse_grammar(text)) == text


def test_parse_grammar_example():
    g = parse_grammar("start theta; rigid alpha theta; theta -> f(alpha,alpha); alpha -> 0 | s(0);")
    assert g == g0()


# --- randomized agreement with the oracle ----------------------------------------

def test_random_grammars_match_oracle():
    rng = random.Random(7)
    for _ in range(40):
        g = random_grammar(rng)
        assert compute_language(g) == brute_rigid_language(g)
        assert compute_language(g) <= compute_regular_language(g)


def test_language_size_bound():
    rng = random.Random(8)
    for _ in range(30):
        g = random_grammar(rng)
        bound = 1
        for a in g.nonterminals:
            bound *= max(1, len(g.productions_of(a)))
        assert len(compute_language(g)) <= bound


def test_random_normalization():
    rng = random.Random(9)
    seen = 0
    for _ in range(30):
        g = random_grammar(rng)
        for d in random_rigid_derivations(g, limit=20):
            out = normalize_derivation(g, d)
            assert check_rigidity(g, out) is None
            assert replay(g, out)[-1] == replay(g, d)[-1]
            for b in g.rigid:
                assert len({st.production for st in out.steps
                            if st.production[0] == b}) <= 1
            seen += 1
    assert seen > 50


def test_random_elimination_preserves_language():
    rng = random.Random(10)
    checked = 0
    for _ in range(60):
        g = random_grammar(rng)
        for b in sorted(g.nonterminals, key=lambda x: x.name):
            if b != g.start and len(g.productions_of(b)) == 1:
                g2 = eliminate_nonterminal(g, b)
                assert compute_language(g2) == compute_language(g)
                checked += 1
                break
    assert checked > 10
