"""Grammar extraction: the totally rigid tree grammar of a simple proof.

Start productions rewrite the start symbol to the (term-encoded) Herbrand-set
elements; every quantified cut contributes productions from its eigenvariable
to the witness terms of its existential side.  Quantifier-free formulas are
encoded as terms: `and`/`or` are binary alphabet symbols, `top`/`bot` nullary,
and each literal becomes a head symbol (`P`, `~P`) applied to its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammars import (
    DEFAULT_LANGUAGE_CAP, GrammarError, Production, TreeGrammar, compute_language,
    grammar, is_acyclic,
)
from .parsing import RESERVED
from .proofs import (
    Locator, Proof, ProofError, all_nodes_of_rule, b_substitutions,
    cut_eigenvariable, cut_nodes, eigenvariables, exists_side, herbrand_set,
    is_simple, proof_var_names, terms_of,
)
from .syntax import (
    And, Bot, Formula, Lit, Or, Symbol, Term, Top, is_weak, quantifier_free,
    var,
)

AND = Symbol("and", 2)
OR = Symbol("or", 2)
TOPS = Symbol("top", 0)
BOTS = Symbol("bot", 0)


def encode_formula(f: Formula) -> Term:
    match f:
        case Lit(name, args, positive):
            if name in RESERVED:
                raise GrammarError(f"literal name {name!r} clashes with the encoding")
            head = Symbol(name if positive else "~" + name, len(args))
            return Term(head, args)
        case Top():
            return Term(TOPS)
        case Bot():
            return Term(BOTS)
        case And(a, b):
            return Term(AND, (encode_formula(a), encode_formula(b)))
        case Or(a, b):
            return Term(OR, (encode_formula(a), encode_formula(b)))
    raise GrammarError(f"cannot encode non-quantifier-free formula: {f}")


def decode_formula(t: Term) -> Formula:
    name, arity = t.head.name, t.head.arity
    if (name, arity) == ("and", 2):
        return And(decode_formula(t.args[0]), decode_formula(t.args[1]))
    if (name, arity) == ("or", 2):
        return Or(decode_formula(t.args[0]), decode_formula(t.args[1]))
    if (name, arity) == ("top", 0):
        return Top()
    if (name, arity) == ("bot", 0):
        return Bot()
    if name.startswith("~"):
        return Lit(name[1:], t.args, positive=False)
    return Lit(name, t.args, positive=True)


@dataclass(frozen=True)
class ProofGrammar:
    """The grammar of a proof, with back-references from productions to the
    inferences they came from."""
    grammar: TreeGrammar
    start_occurrences: tuple[tuple[Production, int], ...]
    cut_locators: tuple[tuple[Production, Locator], ...]

    def cut_of(self, production: Production) -> Locator | None:
        for p, loc in self.cut_locators:
            if p == production:
                return loc
        return None


def fresh_start_symbol(pi: Proof) -> Symbol:
    used = proof_var_names(pi)
    name = "S"
    k = 0
    while name in used:
        k += 1
        name = f"S{k}"
    return var(name)


def extract_grammar(pi: Proof) -> ProofGrammar:
    simple = is_simple(pi)
    if simple is not True:
        raise ProofError(f"proof is not simple: {simple.reason}")
    theta = fresh_start_symbol(pi)
    _, evc = eigenvariables(pi)

    start_prods: list[tuple[Production, int]] = []
    from .proofs import occurrence_helems
    for occ, elems in enumerate(occurrence_helems(pi)):
        for e in elems:
            start_prods.append(((theta, encode_formula(e.matrix)), occ))

    cut_prods: list[tuple[Production, Locator]] = []
    for loc, n in cut_nodes(pi):
        alpha = cut_eigenvariable(pi, loc)
        if alpha is None:
            continue
        k, occ_idx = exists_side(n)
        for t in sorted(terms_of(pi, (loc + (k,), occ_idx)), key=repr):
            cut_prods.append(((alpha, t), loc))

    g = grammar(theta,
                [p for p, _ in start_prods] + [p for p, _ in cut_prods],
                nonterminals={theta} | evc)
    if not is_acyclic(g):
        raise GrammarError("grammar of a simple proof must be acyclic")
    return ProofGrammar(g, tuple(start_prods), tuple(cut_prods))


def proof_language(pi: Proof, cap: int = DEFAULT_LANGUAGE_CAP) -> set[Formula]:
    """L(G(pi)) decoded back to formulas."""
    pg = extract_grammar(pi)
    return {decode_formula(t) for t in compute_language(pg.grammar, cap)}


def herbrand_content(pi: Proof, cap: int = DEFAULT_LANGUAGE_CAP) -> set[Formula]:
    """The language of the proof's grammar under canonical variable renaming.

    For weak end-sequents the renaming is the identity.  In general it is
    computed by the Skolemization route: skolemize the proof (turning the
    end-sequent weak), take the language of the skolemized grammar, and
    deskolemize, which replaces every maximal Skolem term by its canonical
    variable."""
    from .herbrand import deskolemize_instances, skolemize_proof
    simple = is_simple(pi)
    if simple is not True:
        raise ProofError(f"proof is not simple: {simple.reason}")
    if is_weak(pi.sequent):
        return proof_language(pi, cap)
    skp, skmap, _ = skolemize_proof(pi)
    lang = proof_language(skp, cap)
    return deskolemize_instances(lang, skmap)


def content_json(content: set[Formula]) -> list[str]:
    from .syntax import formula_str
    return sorted(formula_str(f) for f in content)


# ---------------------------------------------------------------------------
# Structural diagnostics for grammar paths


def path_inferences(pi: Proof, pg: ProofGrammar, path) -> list[dict]:
    """For each production alpha -> t on a grammar path, the locators of the
    corresponding cut, its universal inference, and the existential
    inferences contributing t."""
    from .proofs import exists_side, subproof_at, terms_of
    out = []
    for lhs, rhs in path.productions:
        cut_loc = pg.cut_of((lhs, rhs))
        if cut_loc is None:
            raise ProofError(f"production {lhs.name} -> {rhs} has no source cut")
        n = subproof_at(pi, cut_loc)
        k, occ = exists_side(n)
        all_side = 1 - k
        ex_locs = _witness_locators(pi, cut_loc + (k,), occ, rhs)
        out.append({
            "production": (lhs, rhs),
            "cut": cut_loc,
            "forall": cut_loc + (all_side,),
            "exists": ex_locs,
        })
    return out


def _witness_locators(pi: Proof, loc, occ, t) -> list:
    """Locators of the ex-inferences that introduce witness t into the
    traced occurrence."""
    from .proofs import conc_to_prem_sources, subproof_at
    node = subproof_at(pi, loc)
    if node.main == occ:
        if node.rule == "ex":
            return [loc] if node.witness == t else []
        if node.rule == "weak":
            return []
        if node.rule == "cont":
            i, j = node.aux
            return (_witness_locators(pi, loc + (0,), i, t)
                    + _witness_locators(pi, loc + (0,), j, t))
    out = []
    for k, i in conc_to_prem_sources(node, occ):
        out.extend(_witness_locators(pi, loc + (k,), i, t))
    return out


def check_path_lowermost_cut(pi: Proof, pg: ProofGrammar, path) -> dict:
    """The structural content of the path lemma: among the inferences of a
    grammar path there is a lowermost cut; the first production's universal
    inference sits on its right, the last production's witness inference on
    its left (sides normalized to the cut's orientation)."""
    from .proofs import exists_side, relative_position, subproof_at
    infos = path_inferences(pi, pg, path)
    cuts = [x["cut"] for x in infos]
    lowermost = min(cuts, key=len)
    for c in cuts:
        rel = relative_position(pi, c, lowermost)
        assert rel in ("same", "left-above", "right-above", "ancestor-line"), rel
    n = subproof_at(pi, lowermost)
    ex_k, _ = exists_side(n)
    all_above = "right-above" if ex_k == 0 else "left-above"
    ex_above = "left-above" if ex_k == 0 else "right-above"
    first_forall = infos[0]["forall"]
    res = {
        "lowermost_cut": lowermost,
        "forall_side_ok":
            relative_position(pi, first_forall, lowermost) in (all_above, "ancestor-line")
            or first_forall == lowermost + (1 - ex_k,),
        "exists_side_ok": all(
            relative_position(pi, e, lowermost) == ex_above or _is_prefix_loc(lowermost + (ex_k,), e)
            for e in infos[-1]["exists"]),
    }
    return res


def _is_prefix_loc(p, q) -> bool:
    return len(p) <= len(q) and q[:len(p)] == p
