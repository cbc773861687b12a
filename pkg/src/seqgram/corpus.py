"""Fixture proofs used by the test harness and the CLI corpus commands.

Each builder returns a well-formed simple proof.  The fixtures are small
enough to reason about by hand; their expected artifacts (grammars,
languages, Herbrand contents) are frozen as goldens under corpus/.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .proofs import (
    Proof, and_intro, assert_wellformed, ax, cont, cut, exists_intro,
    forall_intro, is_simple, or_intro, top_intro, weak,
)
from .syntax import BOT, Formula, Lit, Or, T, Term, V, var


def lit(name: str, *args: Term, positive: bool = True) -> Lit:
    return Lit(name, tuple(args), positive)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    build: object                      # () -> Proof
    tags: tuple[str, ...] = ()
    description: str = ""

    def proof(self) -> Proof:
        p = self.build()
        assert_wellformed(p)
        simple = is_simple(p)
        if simple is not True:
            raise AssertionError(f"{self.name}: not simple: {simple}")
        return p


# ---------------------------------------------------------------------------
# The drinker: end-sequent  (ex x (or ~P(x) (all y P(y))))


def drinker_cutfree() -> Proof:
    """Cut-free proof with two instances: existential witnesses c and alpha,
    universal eigenvariables alpha and beta."""
    alpha, beta = V("alpha"), V("beta")
    p = ax(lit("P", alpha))                       # P(a), ~P(a)
    p = weak(p, lit("P", beta))                   # P(a), ~P(a), P(b)
    p = forall_intro(p, 2, var("beta"))           # P(a), ~P(a), all y P(y)
    p = or_intro(p, 1, 2)                         # P(a), (or ~P(a) (all y P(y)))
    p = exists_intro(p, 1, alpha)                 # P(a), F
    p = forall_intro(p, 0, var("alpha"))          # all y P(y), F
    p = weak(p, lit("P", T("c"), positive=False))  # all y P(y), F, ~P(c)
    p = or_intro(p, 2, 0)                         # F, (or ~P(c) (all y P(y)))
    p = exists_intro(p, 1, T("c"))                # F, F
    return cont(p, 0, 1)                          # F


def drinker_with_cut() -> Proof:
    """Simple proof of the drinker sequent with one quantified cut on
    (ex z ~P(z)): the case split on whether P holds everywhere."""
    gamma, delta, eps = V("gamma"), V("delta"), V("eps")
    # right side: assume P holds everywhere (cut eigenvariable gamma)
    r = ax(lit("P", gamma))                       # P(g), ~P(g)
    r = weak(r, lit("P", delta))                  # P(g), ~P(g), P(d)
    r = forall_intro(r, 2, var("delta"))          # P(g), ~P(g), all y P(y)
    r = or_intro(r, 1, 2)                         # P(g), (or ~P(g) (all y P(y)))
    r = exists_intro(r, 1, gamma)                 # P(g), F
    r = forall_intro(r, 0, var("gamma"))          # all z P(z), F
    # left side: a counterexample eps gives the cut formula (ex z ~P(z))
    l = ax(lit("P", eps))                         # P(e), ~P(e)
    l = exists_intro(l, 1, eps)                   # P(e), ex z ~P(z)
    l = forall_intro(l, 0, var("eps"))            # all y P(y), ex z ~P(z)
    l = weak(l, lit("P", T("d"), positive=False))  # all y P(y), ex z, ~P(d)
    l = or_intro(l, 2, 0)                         # ex z ~P(z), (or ~P(d) (all y P(y)))
    l = exists_intro(l, 1, T("d"))                # ex z ~P(z), F
    p = cut(l, r, 0, 0)                           # F, F
    return cont(p, 0, 1)                          # F


# ---------------------------------------------------------------------------


def double_contraction() -> Proof:
    """Propositional cut under contractions on both sides: the classic
    source of non-confluent duplication.  Both contracted copies are real
    (axiom-backed, joined by conjunctions): a weakening-backed copy would
    let an axiom step surface a latent bot into the Herbrand set."""
    l = and_intro(ax(lit("P", positive=False)), ax(lit("P", positive=False)), 0, 0)
    l = cont(l, 0, 1)                 # P, (and ~P ~P)
    r = and_intro(ax(lit("P")), ax(lit("P")), 0, 0)
    r = cont(r, 0, 1)                 # ~P, (and P P)
    return cut(l, r, 0, 0)            # (and ~P ~P), (and P P)


def quantifier_free_cut() -> Proof:
    l = ax(lit("P", T("c")))                        # P(c), ~P(c)
    r = ax(lit("P", T("c"), positive=False))        # ~P(c), P(c)
    return cut(l, r, 0, 0)                          # ~P(c), P(c)


def top_bot_cut() -> Proof:
    """A cut on top whose bot side is weakening-introduced: stuck under
    non-erasing reduction, erasable under full reduction."""
    l = top_intro()                                  # top
    r = ax(lit("Q", T("c")))                         # Q(c), ~Q(c)
    r = weak(r, BOT)                                 # Q(c), ~Q(c), bot
    return cut(l, r, 0, 2)                           # Q(c), ~Q(c)


def chain2() -> Proof:
    """Cut-free proof of (ex x (or ~P(x) P(f(x)))) with witnesses c, f(c)."""
    fc = T("f", T("c"))
    p = ax(lit("P", fc))                             # P(fc), ~P(fc)
    p = weak(p, lit("P", T("f", fc)))                # P(fc), ~P(fc), P(ffc)
    p = or_intro(p, 1, 2)                            # P(fc), (or ~P(fc) P(ffc))
    p = exists_intro(p, 1, fc)                       # P(fc), F
    p = weak(p, lit("P", T("c"), positive=False))    # P(fc), F, ~P(c)
    p = or_intro(p, 2, 0)                            # F, (or ~P(c) P(fc))
    p = exists_intro(p, 1, T("c"))                   # F, F
    return cont(p, 0, 1)                             # F


def two_conjunct() -> Proof:
    """Proof of (ex x (all y (or ~P(x,y) ~Q(x,y)))); (and (ex x P(c,x)) (ex x Q(c,x)))
    ending in a conjunction: two universal instances sharing their
    existential witness, collapsed by Skolemization."""
    a, b = V("alpha"), V("beta")
    l = ax(lit("P", T("c"), a))                      # P(c,a), ~P(c,a)
    l = exists_intro(l, 0, a)                        # ex x P(c,x), ~P(c,a)
    l = weak(l, lit("Q", T("c"), a, positive=False))  # ..., ~Q(c,a)
    l = or_intro(l, 1, 2)                            # ex x P(c,x), (or ~P ~Q)(c,a)
    l = forall_intro(l, 1, var("alpha"))             # ex x P(c,x), all y (or ...)(c,y)
    l = exists_intro(l, 1, T("c"))                   # ex x P(c,x), F1
    r = ax(lit("Q", T("c"), b))                      # Q(c,b), ~Q(c,b)
    r = exists_intro(r, 0, b)                        # ex x Q(c,x), ~Q(c,b)
    r = weak(r, lit("P", T("c"), b, positive=False))  # ..., ~P(c,b)
    r = or_intro(r, 2, 1)                            # ex x Q(c,x), (or ~P ~Q)(c,b)
    r = forall_intro(r, 1, var("beta"))              # ex x Q(c,x), all y ...
    r = exists_intro(r, 1, T("c"))                   # ex x Q(c,x), F1
    p = and_intro(l, r, 0, 0)                        # F1, F1, (and exP exQ)
    return cont(p, 0, 1)                             # F1, (and exP exQ)


def chain_with_cut() -> Proof:
    """Proof of a weak sequent  (ex x (or ~R(x) P(f(x)))); (ex x R(x))  via a
    quantified cut on (ex z ~R(z)): the cut eigenvariable feeds the first
    end formula, the cut witness the second."""
    gamma = V("gamma")
    w = T("w")
    l = ax(lit("R", w))                              # R(w), ~R(w)
    l = exists_intro(l, 1, w)                        # R(w), ex z ~R(z)
    l = exists_intro(l, 0, w)                        # ex x R(x), ex z ~R(z)
    r = ax(lit("R", gamma))                          # R(g), ~R(g)
    r = weak(r, lit("P", T("f", gamma)))             # R(g), ~R(g), P(f(g))
    r = or_intro(r, 1, 2)                            # R(g), (or ~R(g) P(f(g)))
    r = exists_intro(r, 1, gamma)                    # R(g), F
    r = forall_intro(r, 0, var("gamma"))             # all z R(z), F
    return cut(l, r, 1, 0)                           # ex x R(x), F


def stacked_cuts() -> Proof:
    """Two quantified cuts, the upper one inside the right premise of the
    lower one; its witness mentions the lower cut's eigenvariable, chaining
    the grammar productions."""
    gamma, delta = V("gamma"), V("delta")
    w = T("w")
    # inner lemma (ex u ~Q(u)) used inside the gamma side
    il = ax(lit("Q", T("g", gamma)))                 # Q(g(gam)), ~Q(g(gam))
    il = exists_intro(il, 1, T("g", gamma))          # Q(g(gam)), ex u ~Q(u)
    il = exists_intro(il, 0, T("g", gamma))          # ex x Q(x), ex u ~Q(u)
    ir = ax(lit("Q", delta))                         # Q(d), ~Q(d)
    ir = exists_intro(ir, 1, delta)                  # Q(d), ex y ~Q(y)... as end part
    ir = forall_intro(ir, 0, var("delta"))           # all u Q(u), ex y ~Q(y)
    inner = cut(il, ir, 1, 0)                        # ex x Q(x), ex y ~Q(y)
    # outer cut on (ex z ~R(z)) with the inner proof in its right premise
    rr = ax(lit("R", gamma))                         # R(gam), ~R(gam)
    rr = exists_intro(rr, 1, gamma)                  # R(gam), ex v ~R(v)... end part
    right = and_intro(inner, rr, 1, 1)               # ex x Q(x), R(gam), (and (ex y ~Q(y)) (ex v ~R(v)))
    right = forall_intro(right, 1, var("gamma"))     # ex x Q(x), all z R(z), (and ...)
    ll = ax(lit("R", w))
    ll = exists_intro(ll, 1, w)                      # R(w), ex z ~R(z)
    ll = exists_intro(ll, 0, w)                      # ex x R(x), ex z ~R(z)
    return cut(ll, right, 1, 1)                      # ex x R(x), ex x Q(x), (and ...)


# ---------------------------------------------------------------------------
# The corpus


def fixtures() -> tuple[CorpusEntry, ...]:
    return (
        CorpusEntry("drinker_cutfree", drinker_cutfree,
                    ("general",), "cut-free drinker, two instances"),
        CorpusEntry("drinker_with_cut", drinker_with_cut,
                    ("general", "quantified-cut"),
                    "drinker via a case-split cut"),
        CorpusEntry("two_conjunct", two_conjunct,
                    ("general",), "shared-witness universal instances"),
        CorpusEntry("chain2", chain2, ("weak-sequent",),
                    "implication chain, two witnesses"),
        CorpusEntry("chain_with_cut", chain_with_cut,
                    ("weak-sequent", "quantified-cut"),
                    "weak sequent via a quantified cut"),
        CorpusEntry("stacked_cuts", stacked_cuts,
                    ("weak-sequent", "quantified-cut"),
                    "two quantified cuts with chained witnesses"),
        CorpusEntry("double_contraction", double_contraction,
                    ("weak-sequent", "nonconfluence-demo"),
                    "propositional cut under contractions on both sides"),
        CorpusEntry("quantifier_free_cut", quantifier_free_cut,
                    ("weak-sequent",), "axiom against axiom"),
        CorpusEntry("top_bot_cut", top_bot_cut,
                    ("weak-sequent",),
                    "cut on top, stuck under non-erasing reduction"),
        CorpusEntry("sk_drinker_cutfree",
                    lambda: _skolemized(drinker_cutfree),
                    ("weak-sequent",), "skolemized cut-free drinker"),
        CorpusEntry("sk_drinker_with_cut",
                    lambda: _skolemized(drinker_with_cut),
                    ("weak-sequent", "quantified-cut"),
                    "skolemized drinker with its cut intact"),
        CorpusEntry("sk_two_conjunct",
                    lambda: _skolemized(two_conjunct),
                    ("weak-sequent",), "skolemized two-conjunct proof"),
    )


def _skolemized(build) -> Proof:
    from .herbrand import skolemize_proof
    return skolemize_proof(build())[0]


def fixture(name: str) -> CorpusEntry:
    for e in fixtures():
        if e.name == name:
            return e
    raise KeyError(name)


def golden_bundle(entry: CorpusEntry) -> dict:
    """Regenerable golden artifacts for one corpus entry: canonical proof
    text, grammar, language, content, and the scripted-run normal-form
    content hash data."""
    from .extraction import content_json, extract_grammar, herbrand_content, proof_language
    from .grammars import print_grammar
    from .proofs import print_proof, proof_hash
    from .syntax import formula_str
    p = entry.proof()
    pg = extract_grammar(p)
    return {
        "name": entry.name,
        "tags": list(entry.tags),
        "proof_hash": proof_hash(p),
        "proof": print_proof(p),
        "grammar": print_grammar(pg.grammar),
        "language": sorted(formula_str(f) for f in proof_language(p)),
        "content": content_json(herbrand_content(p)),
    }


def write_corpus(directory: str):
    """Write proof files and goldens; used by `python -m seqgram.corpus`."""
    import json
    import os
    from .proofs import print_proof
    os.makedirs(directory, exist_ok=True)
    for e in fixtures():
        with open(os.path.join(directory, f"{e.name}.p"), "w", encoding="utf-8") as f:
            f.write(print_proof(e.proof()))
        with open(os.path.join(directory, f"{e.name}.golden.json"), "w",
                  encoding="utf-8") as f:
            json.dump(golden_bundle(e), f, sort_keys=True, indent=1)
            f.write("\n")


if __name__ == "__main__":
    import sys
    write_corpus(sys.argv[1] if len(sys.argv) > 1 else "corpus")
