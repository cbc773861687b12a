"""Seeded random generators: grammars for the grammar-lemma checks and
simple proofs for the confluence harness.

Generated proofs are built from a few hand-verified templates (chains of
implications, case-split cuts with one or two witnesses, stacked cuts with
chained witnesses, drinker- and two-conjunct-style universal instances)
composed by conjunction introduction and decorated with weakening padding.
Every weakening with cut destiny is quantified: a weakening-backed literal
cut formula would let an axiom step surface a latent bot into the language.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .grammars import TreeGrammar, grammar, nt
from .syntax import Symbol, Term, term_symbols


# ---------------------------------------------------------------------------
# Random totally rigid acyclic grammars.
#
# Productions of N_i mention only N_j with j > i, so acyclicity holds by
# construction.  Non-terminal occurrences per right-hand side are limited to
# keep brute-force derivation enumeration cheap.

_SIG = [("c0", 0), ("c1", 0), ("s", 1), ("g", 2)]


def random_grammar(rng: random.Random, max_nts: int = 6, max_prods: int = 3,
                   max_depth: int = 4) -> TreeGrammar:
    n = rng.randint(2, max_nts)
    nts = [nt(f"N{i}") for i in range(n)]
    prods = []
    for i, a in enumerate(nts):
        later = nts[i + 1:]
        lo = 1 if i == 0 else 0
        for _ in range(rng.randint(lo, max_prods)):
            prods.append((a, _random_rhs(rng, later, max_depth)))
    return grammar(nts[0], prods, nonterminals=set(nts))


def _random_rhs(rng: random.Random, later: list[Symbol], max_depth: int) -> Term:
    budget = [2]  # at most 2 non-terminal occurrences per right-hand side

    def go(depth: int) -> Term:
        if later and budget[0] > 0 and rng.random() < 0.35:
            budget[0] -= 1
            return Term(rng.choice(later))
        name, arity = rng.choice(_SIG)
        if depth <= 0:
            name, arity = rng.choice([s for s in _SIG if s[1] == 0])
        return Term(Symbol(name, arity), tuple(go(depth - 1) for _ in range(arity)))

    return go(rng.randint(0, max_depth))


def random_rigid_derivations(g: TreeGrammar, limit: int = 200):
    """All rigid-valid complete derivations of g (up to `limit`), via
    leftmost-first enumeration of the regular derivations."""
    from .grammars import Derivation, Step, check_rigidity
    from .syntax import positions, replace_at, subterm_at

    out = []

    def leftmost(t: Term):
        for p in positions(t):
            s = subterm_at(t, p)
            if s.head in g.nonterminals and not s.args:
                return p
        return None

    def go(term: Term, steps: list):
        if len(out) >= limit:
            return
        p = leftmost(term)
        if p is None:
            d = Derivation(g.start, tuple(steps))
            if check_rigidity(g, d) is None:
                out.append(d)
            return
        head = subterm_at(term, p).head
        for rhs in g.productions_of(head):
            go(replace_at(term, p, rhs), steps + [Step(p, (head, rhs))])

    go(Term(g.start), [])
    return out


# ---------------------------------------------------------------------------
# Random simple proofs


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 1
    max_cuts: int = 2
    max_quantified_cuts: int = 2
    max_term_depth: int = 3
    signature_size: int = 2
    shape: str = "weak"          # 'weak' | 'general'

    def __post_init__(self):
        if self.shape not in ("weak", "general"):
            raise ValueError(f"unknown end-sequent shape {self.shape!r}")


class GenerationFailed(Exception):
    pass


def _ground_term(rng: random.Random, cfg: GeneratorConfig, depth: int | None = None) -> Term:
    from .syntax import T
    consts = ["c", "d", "e1"][: max(1, cfg.signature_size)]
    funs = ["f", "g"][: max(1, cfg.signature_size)]
    if depth is None:
        depth = rng.randint(0, cfg.max_term_depth)
    t = T(rng.choice(consts))
    for _ in range(depth):
        t = T(rng.choice(funs), t)
    return t


class _Names:
    """Deterministic fresh-name supply for one generated proof."""

    def __init__(self):
        self.counter = 0

    def eigen(self) -> str:
        self.counter += 1
        return f"a{self.counter}"


def _unit_chain(rng: random.Random, cfg: GeneratorConfig):
    """Cut-free proof of (ex x (or ~P(x) P(f(x)))) with chained witnesses."""
    from .corpus import lit
    from .proofs import cont, exists_intro, or_intro, weak, ax
    from .syntax import T
    pred = rng.choice(["P", "Q", "R"])
    fun = rng.choice(["f", "g"][: max(1, cfg.signature_size)])
    base = _ground_term(rng, cfg, depth=rng.randint(0, 1))
    t1 = Term(Symbol(fun, 1), (base,))
    t2 = Term(Symbol(fun, 1), (t1,))
    p = ax(lit(pred, t1))
    p = weak(p, lit(pred, t2))
    p = or_intro(p, 1, 2)
    p = exists_intro(p, 1, t1)
    p = weak(p, lit(pred, base, positive=False))
    p = or_intro(p, 2, 0)
    p = exists_intro(p, 1, base)
    return cont(p, 0, 1)


def _unit_qfcut(rng: random.Random, cfg: GeneratorConfig):
    from .corpus import lit
    from .proofs import ax, cut
    pred = rng.choice(["P", "Q", "R"])
    t = _ground_term(rng, cfg)
    l = ax(lit(pred, t))
    r = ax(lit(pred, t, positive=False))
    return cut(l, r, 0, 0)


def _unit_splice(rng: random.Random, cfg: GeneratorConfig, names: _Names):
    """Case-split cut on (ex z ~R(z)) with one or two real witnesses; the
    eigenvariable side emits an end-sequent instance with a weakened tail."""
    from .corpus import lit
    from .proofs import and_intro, ax, cont, cut, exists_intro, forall_intro, or_intro, weak
    from .syntax import T, V, var
    pred = rng.choice(["R", "P", "Q"])
    mpred = rng.choice(["P", "Q", "S"])
    fun = rng.choice(["f", "g"][: max(1, cfg.signature_size)])
    gname = names.eigen()
    gamma = V(gname)

    def ex_block(w: Term):
        b = ax(lit(pred, w))
        b = exists_intro(b, 1, w)           # R(w), ex z ~R(z)
        b = exists_intro(b, 0, w)           # ex x R(x), ex z ~R(z)
        return b

    k = rng.randint(1, 2)
    if k == 1:
        left = ex_block(_ground_term(rng, cfg))
        exz_index = 1
    else:
        b1 = ex_block(_ground_term(rng, cfg))
        b2 = ex_block(_ground_term(rng, cfg))
        left = and_intro(b1, b2, 0, 0)      # exz1, exz2, (and exxR exxR)
        left = cont(left, 0, 1)             # exz, (and ...)
        exz_index = 0

    r = ax(lit(pred, gamma))                                    # R(g), ~R(g)
    r = weak(r, lit(mpred, Term(Symbol(fun, 1), (gamma,))))     # ..., M(f(g))
    r = or_intro(r, 1, 2)                   # R(g), (or ~R(g) M(f(g)))
    r = exists_intro(r, 1, gamma)           # R(g), F
    r = forall_intro(r, 0, var(gname))      # all z R(z), F
    return cut(left, r, exz_index, 0)


def _unit_stacked(rng: random.Random, cfg: GeneratorConfig, names: _Names):
    """Two quantified cuts with chained witnesses (the inner witness mentions
    the outer eigenvariable)."""
    from .corpus import lit
    from .proofs import and_intro, ax, cut, exists_intro, forall_intro
    from .syntax import V, var
    p1 = rng.choice(["R", "P"])
    p2 = rng.choice(["Q", "S"])
    fun = rng.choice(["f", "g"][: max(1, cfg.signature_size)])
    g1, g2 = names.eigen(), names.eigen()
    gamma, delta = V(g1), V(g2)
    w = _ground_term(rng, cfg)
    chained = Term(Symbol(fun, 1), (gamma,))

    il = ax(lit(p2, chained))
    il = exists_intro(il, 1, chained)
    il = exists_intro(il, 0, chained)       # ex x Q(x), ex u ~Q(u)
    ir = ax(lit(p2, delta))
    ir = exists_intro(ir, 1, delta)
    ir = forall_intro(ir, 0, var(g2))       # all u Q(u), ex y ~Q(y)
    inner = cut(il, ir, 1, 0)               # ex x Q(x), ex y ~Q(y)
    rr = ax(lit(p1, gamma))
    rr = exists_intro(rr, 1, gamma)         # R(g), ex v ~R(v)
    right = and_intro(inner, rr, 1, 1)      # ex x Q(x), R(g), (and ...)
    right = forall_intro(right, 1, var(g1))
    ll = ax(lit(p1, w))
    ll = exists_intro(ll, 1, w)
    ll = exists_intro(ll, 0, w)
    return cut(ll, right, 1, 1)


def _unit_drinker(rng: random.Random, cfg: GeneratorConfig, names: _Names):
    """Drinker-style proof: general end-sequent with universal instances."""
    from .corpus import lit
    from .proofs import ax, cont, exists_intro, forall_intro, or_intro, weak
    from .syntax import V, var
    pred = rng.choice(["P", "Q"])
    n1, n2 = names.eigen(), names.eigen()
    alpha, beta = V(n1), V(n2)
    wit = _ground_term(rng, cfg)
    p = ax(lit(pred, alpha))
    p = weak(p, lit(pred, beta))
    p = forall_intro(p, 2, var(n2))
    p = or_intro(p, 1, 2)
    p = exists_intro(p, 1, alpha)
    p = forall_intro(p, 0, var(n1))
    p = weak(p, lit(pred, wit, positive=False))
    p = or_intro(p, 2, 0)
    p = exists_intro(p, 1, wit)
    return cont(p, 0, 1)


def _unit_two_conjunct(rng: random.Random, cfg: GeneratorConfig, names: _Names):
    from .corpus import lit
    from .proofs import and_intro, ax, cont, exists_intro, forall_intro, or_intro, weak
    from .syntax import T, V, var
    pa = rng.choice(["P", "Q"])
    pb = "S" if pa == "Q" else "Q"
    cconst = _ground_term(rng, cfg, depth=0)
    n1, n2 = names.eigen(), names.eigen()
    a, b = V(n1), V(n2)
    l = ax(lit(pa, cconst, a))
    l = exists_intro(l, 0, a)
    l = weak(l, lit(pb, cconst, a, positive=False))
    l = or_intro(l, 1, 2)
    l = forall_intro(l, 1, var(n1))
    l = exists_intro(l, 1, cconst)
    r = ax(lit(pb, cconst, b))
    r = exists_intro(r, 0, b)
    r = weak(r, lit(pa, cconst, b, positive=False))
    r = or_intro(r, 2, 1)
    r = forall_intro(r, 1, var(n2))
    r = exists_intro(r, 1, cconst)
    p = and_intro(l, r, 0, 0)
    return cont(p, 0, 1)


def generate_proof(cfg: GeneratorConfig):
    """Deterministic-per-seed simple proof; raises GenerationFailed if no
    attempt passes validation."""
    from .extraction import proof_language
    from .proofs import assert_wellformed, is_simple
    for attempt in range(20):
        rng = random.Random(f"{cfg.seed}:{attempt}")
        try:
            p = _generate_once(rng, cfg)
            assert_wellformed(p)
            if is_simple(p) is not True:
                continue
            if len(proof_language(p)) > 10_000:
                continue
            return p
        except Exception:
            continue
    raise GenerationFailed(f"no valid proof after 20 attempts (seed {cfg.seed})")


def _generate_once(rng: random.Random, cfg: GeneratorConfig):
    from .proofs import and_intro, cont, weak
    from .corpus import lit
    names = _Names()
    units = []
    cuts = 0
    qcuts = 0
    n_units = rng.randint(1, 3)
    for u in range(n_units):
        choices = ["chain"]
        if cuts < cfg.max_cuts:
            choices.append("qfcut")
            if qcuts < cfg.max_quantified_cuts:
                choices += ["splice", "splice"]
            if qcuts + 1 < cfg.max_quantified_cuts:
                choices.append("stacked")
        if cfg.shape == "general":
            choices += ["drinker", "drinker", "two_conjunct"]
            if u == 0:
                choices = ["drinker", "drinker", "two_conjunct"]
        kind = rng.choice(choices)
        if kind == "chain":
            units.append(_unit_chain(rng, cfg))
        elif kind == "qfcut":
            units.append(_unit_qfcut(rng, cfg))
            cuts += 1
        elif kind == "splice":
            units.append(_unit_splice(rng, cfg, names))
            cuts += 1
            qcuts += 1
        elif kind == "stacked":
            units.append(_unit_stacked(rng, cfg, names))
            cuts += 2
            qcuts += 2
        elif kind == "drinker":
            units.append(_unit_drinker(rng, cfg, names))
        else:
            units.append(_unit_two_conjunct(rng, cfg, names))
    p = units[0]
    for q in units[1:]:
        i = rng.randrange(len(p.sequent))
        j = rng.randrange(len(q.sequent))
        p = and_intro(p, q, i, j)
    # padding: weakenings (end destiny only) and a contraction when possible
    for _ in range(rng.randint(0, 2)):
        pad = lit(rng.choice(["P", "Q", "R"]), _ground_term(rng, cfg),
                  positive=rng.random() < 0.5)
        p = weak(p, pad)
    if rng.random() < 0.5:
        seen: dict = {}
        for k, f in enumerate(p.sequent):
            if f in seen:
                p = cont(p, seen[f], k)
                break
            seen[f] = k
    return p
