"""Proof trees for the one-sided sequent calculus.

Rules: ax, top, weak, cont, cut, or, and, all, ex.  Conclusions are sequences
of formulas with stable occurrence indices; every rule records its main
occurrence (in the conclusion) and auxiliary occurrences (in the premises),
so occurrence ancestry is unambiguous even with duplicate formulas.

Conventions for conclusion construction:
  weak     appends the new formula at the end (main = last index)
  cont     keeps occurrence i, removes occurrence j (i < j, main = i)
  cut      conclusion = left premise minus left aux ++ right minus right aux
  or       removes both auxiliaries, appends the disjunction (main = last)
  and      removes the auxiliaries, appends the conjunction (main = last)
  all/ex   replaces the auxiliary occurrence in place (main = aux index)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .parsing import parse_formula, parse_term, tokenize, _Cursor, _is_ident
from .syntax import (
    All, And, BOT, Bot, Ex, Formula, Kind, Lit, Or, Position, Sequent, Subst,
    Symbol, SyntaxError_, TOP, Term, Top, bound, canon, dual, formula_str,
    formula_vars, instantiate, mk_all, mk_ex, occurs_in_formula,
    occurs_in_sequent, quantifier_free, subst_formula, subst_term, term_str,
    term_symbols, var,
)

RULES = ("ax", "top", "weak", "cont", "cut", "or", "and", "all", "ex")


class ProofError(SyntaxError_):
    pass


@dataclass(frozen=True)
class Proof:
    rule: str
    premises: tuple["Proof", ...]
    sequent: Sequent
    main: int | None = None
    aux: tuple[int, ...] = ()
    var: Symbol | None = None       # eigenvariable of an all-node
    witness: Term | None = None     # witness term of an ex-node
    formula: Formula | None = None  # quantified main formula of all/ex

    def __repr__(self):
        return f"<{self.rule} ⊢ {'; '.join(map(formula_str, self.sequent))}>"


Locator = tuple[int, ...]
OccurrencePath = tuple[Locator, int]


def subproof_at(pi: Proof, loc: Locator) -> Proof:
    for i in loc:
        if not 0 <= i < len(pi.premises):
            raise ProofError(f"invalid locator {loc}")
        pi = pi.premises[i]
    return pi


def proof_size(pi: Proof) -> int:
    return 1 + sum(proof_size(p) for p in pi.premises)


def all_locators(pi: Proof, prefix: Locator = ()):
    yield prefix
    for i, p in enumerate(pi.premises):
        yield from all_locators(p, prefix + (i,))


def iter_nodes(pi: Proof, prefix: Locator = ()):
    """(locator, node) pairs in one depth-first walk."""
    yield prefix, pi
    for i, p in enumerate(pi.premises):
        yield from iter_nodes(p, prefix + (i,))


# ---------------------------------------------------------------------------
# Constructors


def ax(lit: Formula) -> Proof:
    return Proof("ax", (), (lit, dual(lit)))


def top_intro() -> Proof:
    return Proof("top", (), (TOP,))


def weak(p: Proof, f: Formula) -> Proof:
    return Proof("weak", (p,), p.sequent + (canon(f),), main=len(p.sequent))


def cont(p: Proof, i: int, j: int) -> Proof:
    if not (0 <= i < j < len(p.sequent)):
        raise ProofError(f"cont indices {i},{j} out of range")
    seq = p.sequent[:j] + p.sequent[j + 1:]
    return Proof("cont", (p,), seq, main=i, aux=(i, j))


def cut(left: Proof, right: Proof, ileft: int, iright: int) -> Proof:
    if not (0 <= ileft < len(left.sequent) and 0 <= iright < len(right.sequent)):
        raise ProofError("cut indices out of range")
    seq = (left.sequent[:ileft] + left.sequent[ileft + 1:]
           + right.sequent[:iright] + right.sequent[iright + 1:])
    return Proof("cut", (left, right), seq, aux=(ileft, iright))


def or_intro(p: Proof, i: int, j: int) -> Proof:
    if i == j or not (0 <= i < len(p.sequent) and 0 <= j < len(p.sequent)):
        raise ProofError(f"or indices {i},{j} invalid")
    a, b = p.sequent[i], p.sequent[j]
    rest = tuple(f for k, f in enumerate(p.sequent) if k not in (i, j))
    seq = rest + (canon(Or(a, b)),)
    return Proof("or", (p,), seq, main=len(rest), aux=(i, j))


def and_intro(left: Proof, right: Proof, ileft: int, iright: int) -> Proof:
    if not (0 <= ileft < len(left.sequent) and 0 <= iright < len(right.sequent)):
        raise ProofError("and indices out of range")
    a, b = left.sequent[ileft], right.sequent[iright]
    rest = (left.sequent[:ileft] + left.sequent[ileft + 1:]
            + right.sequent[:iright] + right.sequent[iright + 1:])
    seq = rest + (canon(And(a, b)),)
    return Proof("and", (left, right), seq, main=len(rest), aux=(ileft, iright))


def abstract_all(f: Formula, t: Term, quantifier: str) -> Formula:
    """Quantify over all occurrences of the term t in f."""
    b = bound("_v")

    def in_term(u: Term) -> Term:
        if u == t:
            return Term(b)
        return Term(u.head, tuple(in_term(a) for a in u.args))

    def go(g: Formula) -> Formula:
        match g:
            case Lit(name, args, positive):
                return Lit(name, tuple(in_term(a) for a in args), positive)
            case Top() | Bot():
                return g
            case And(x, y):
                return And(go(x), go(y))
            case Or(x, y):
                return Or(go(x), go(y))
            case Ex(v, body):
                return Ex(v, go(body))
            case All(v, body):
                return All(v, go(body))
        raise ProofError(f"not a formula: {g!r}")

    body = go(f)
    return mk_ex(b, body) if quantifier == "ex" else mk_all(b, body)


def forall_intro(p: Proof, i: int, v: Symbol, formula: Formula | None = None) -> Proof:
    if not 0 <= i < len(p.sequent):
        raise ProofError(f"all index {i} out of range")
    if formula is None:
        formula = abstract_all(p.sequent[i], Term(v), "all")
    formula = canon(formula)
    seq = p.sequent[:i] + (formula,) + p.sequent[i + 1:]
    return Proof("all", (p,), seq, main=i, aux=(i,), var=v, formula=formula)


def exists_intro(p: Proof, i: int, witness: Term, formula: Formula | None = None) -> Proof:
    if not 0 <= i < len(p.sequent):
        raise ProofError(f"ex index {i} out of range")
    if formula is None:
        formula = abstract_all(p.sequent[i], witness, "ex")
    formula = canon(formula)
    seq = p.sequent[:i] + (formula,) + p.sequent[i + 1:]
    return Proof("ex", (p,), seq, main=i, aux=(i,), witness=witness, formula=formula)


# ---------------------------------------------------------------------------
# Occurrence index maps


def prem_to_conc_maps(node: Proof) -> list[list[int | None]]:
    """For each premise, map premise occurrence index -> conclusion index.
    None marks occurrences consumed by a cut."""
    r = node.rule
    if r in ("ax", "top"):
        return []
    if r == "weak":
        n = len(node.premises[0].sequent)
        return [[k for k in range(n)]]
    if r == "cont":
        i, j = node.aux
        n = len(node.premises[0].sequent)
        out: list[int | None] = []
        for k in range(n):
            if k == j:
                out.append(i)
            elif k < j:
                out.append(k)
            else:
                out.append(k - 1)
        return [out]
    if r == "cut":
        il, ir = node.aux
        nl = len(node.premises[0].sequent)
        nr = len(node.premises[1].sequent)
        left = [None if k == il else (k if k < il else k - 1) for k in range(nl)]
        off = nl - 1
        right = [None if k == ir else (off + (k if k < ir else k - 1)) for k in range(nr)]
        return [left, right]
    if r == "or":
        i, j = node.aux
        n = len(node.premises[0].sequent)
        last = len(node.sequent) - 1
        out = []
        for k in range(n):
            if k in (i, j):
                out.append(last)
            else:
                out.append(k - sum(1 for x in (i, j) if x < k))
        return [out]
    if r == "and":
        il, ir = node.aux
        nl = len(node.premises[0].sequent)
        nr = len(node.premises[1].sequent)
        last = len(node.sequent) - 1
        left = [last if k == il else (k if k < il else k - 1) for k in range(nl)]
        off = nl - 1
        right = [last if k == ir else (off + (k if k < ir else k - 1)) for k in range(nr)]
        return [left, right]
    if r in ("all", "ex"):
        n = len(node.premises[0].sequent)
        return [[k for k in range(n)]]
    raise ProofError(f"unknown rule {r}")


def conc_to_prem_sources(node: Proof, occ: int) -> list[tuple[int, int]]:
    """(premise index, premise occurrence) pairs that descend to conclusion
    occurrence `occ`.  Empty for occurrences introduced at this node."""
    out = []
    for k, m in enumerate(prem_to_conc_maps(node)):
        for i, c in enumerate(m):
            if c == occ:
                out.append((k, i))
    return out


# ---------------------------------------------------------------------------
# Well-formedness


@dataclass(frozen=True)
class Diagnostic:
    locator: Locator
    reason: str

    def __bool__(self):
        return False


def _is_literal(f: Formula) -> bool:
    return isinstance(f, Lit)


def check_wellformed(pi: Proof) -> Diagnostic | None:
    """None when every node is a valid rule instance, else the first
    violation in depth-first order."""
    for loc, node in iter_nodes(pi):
        d = _check_node(node, loc)
        if d is not None:
            return d
    return _check_eigen_locality(pi)


def _check_node(n: Proof, loc: Locator) -> Diagnostic | None:
    bad = lambda why: Diagnostic(loc, why)  # noqa: E731
    r = n.rule
    arities = {"ax": 0, "top": 0, "weak": 1, "cont": 1, "cut": 2,
               "or": 1, "and": 2, "all": 1, "ex": 1}
    if r not in arities:
        return bad(f"unknown rule {r}")
    if len(n.premises) != arities[r]:
        return bad(f"{r} expects {arities[r]} premises")
    try:
        if r == "ax":
            if len(n.sequent) != 2 or not _is_literal(n.sequent[0]):
                return bad("axiom must conclude a literal and its dual")
            if n.sequent[1] != dual(n.sequent[0]):
                return bad("axiom formulas are not dual")
        elif r == "top":
            if n.sequent != (TOP,):
                return bad("top rule must conclude exactly top")
        elif r == "weak":
            if n.sequent[:-1] != n.premises[0].sequent or n.main != len(n.sequent) - 1:
                return bad("weakening conclusion mismatch")
        elif r == "cont":
            i, j = n.aux
            p = n.premises[0].sequent
            if not (0 <= i < j < len(p)):
                return bad("contraction indices out of range")
            if p[i] != p[j]:
                return bad("contracted occurrences differ")
            if n.sequent != p[:j] + p[j + 1:] or n.main != i:
                return bad("contraction conclusion mismatch")
        elif r == "cut":
            il, ir = n.aux
            ls, rs = n.premises[0].sequent, n.premises[1].sequent
            if not (0 <= il < len(ls) and 0 <= ir < len(rs)):
                return bad("cut indices out of range")
            if rs[ir] != dual(ls[il]):
                return bad("cut formulas are not dual")
            if n.sequent != ls[:il] + ls[il + 1:] + rs[:ir] + rs[ir + 1:]:
                return bad("cut conclusion mismatch")
        elif r == "or":
            i, j = n.aux
            p = n.premises[0].sequent
            rest = tuple(f for k, f in enumerate(p) if k not in (i, j))
            if n.sequent != rest + (canon(Or(p[i], p[j])),) or n.main != len(rest):
                return bad("disjunction conclusion mismatch")
        elif r == "and":
            il, ir = n.aux
            ls, rs = n.premises[0].sequent, n.premises[1].sequent
            rest = ls[:il] + ls[il + 1:] + rs[:ir] + rs[ir + 1:]
            if n.sequent != rest + (canon(And(ls[il], rs[ir])),) or n.main != len(rest):
                return bad("conjunction conclusion mismatch")
        elif r == "all":
            if not isinstance(n.formula, All) or n.var is None or n.var.kind is not Kind.VAR:
                return bad("all node needs a universal main formula and an eigenvariable")
            if n.sequent[n.main] != n.formula:
                return bad("all conclusion mismatch")
            body = n.formula.body
            if n.premises[0].sequent[n.main] != canon(instantiate(body, n.formula.v, Term(n.var))):
                return bad("all premise is not the eigenvariable instance")
            rest = n.sequent[:n.main] + n.sequent[n.main + 1:]
            if n.premises[0].sequent[:n.main] + n.premises[0].sequent[n.main + 1:] != rest:
                return bad("all context mismatch")
            if occurs_in_sequent(n.var, n.sequent):
                return bad(f"eigenvariable {n.var.name} occurs in the conclusion")
        elif r == "ex":
            if not isinstance(n.formula, Ex) or n.witness is None:
                return bad("ex node needs an existential main formula and a witness")
            if n.sequent[n.main] != n.formula:
                return bad("ex conclusion mismatch")
            if any(s.kind is Kind.BOUND for s in term_symbols(n.witness)):
                return bad("witness contains a bound variable")
            body = n.formula.body
            if n.premises[0].sequent[n.main] != canon(instantiate(body, n.formula.v, n.witness)):
                return bad("ex premise is not the witness instance")
            rest = n.sequent[:n.main] + n.sequent[n.main + 1:]
            if n.premises[0].sequent[:n.main] + n.premises[0].sequent[n.main + 1:] != rest:
                return bad("ex context mismatch")
    except (IndexError, TypeError):
        return bad(f"structurally malformed {r} node")
    return None


def _symbols_of_node(n: Proof) -> set[Symbol]:
    syms: set[Symbol] = set()
    for f in n.sequent:
        syms |= {s for t in _formula_terms(f) for s in term_symbols(t)}
    if n.witness is not None:
        syms |= term_symbols(n.witness)
    return syms


def _formula_terms(f: Formula):
    from .syntax import formula_terms
    return formula_terms(f)


def _check_eigen_locality(pi: Proof) -> Diagnostic | None:
    """Each eigenvariable may occur only inside the subtree above its
    all-inference.  This is what makes the contraction step's wholesale
    renaming of a duplicated subproof sound."""
    node_syms = {loc: _symbols_of_node(n) for loc, n in iter_nodes(pi)}
    for loc, n in all_nodes_of_rule(pi, "all"):
        scope = loc + (0,)
        for other, syms in node_syms.items():
            if n.var in syms and not _prefix(scope, other):
                return Diagnostic(other, f"eigenvariable {n.var.name} escapes its scope")
    return None


def _prefix(p: Locator, q: Locator) -> bool:
    return len(p) <= len(q) and q[:len(p)] == p


def assert_wellformed(pi: Proof):
    d = check_wellformed(pi)
    if d is not None:
        raise ProofError(f"ill-formed proof at {d.locator}: {d.reason}")


# ---------------------------------------------------------------------------
# Regularity, eigenvariables, destinies


def all_nodes_of_rule(pi: Proof, rule: str):
    for loc, n in iter_nodes(pi):
        if n.rule == rule:
            yield loc, n


def is_regular(pi: Proof) -> bool:
    evs = [n.var for _, n in all_nodes_of_rule(pi, "all")]
    return len(evs) == len(set(evs))


Destiny = tuple  # ('end', occ) | ('cut', cut locator)


def destinies(pi: Proof) -> dict[OccurrencePath, Destiny]:
    out: dict[OccurrencePath, Destiny] = {}

    def walk(node: Proof, loc: Locator, dest: list[Destiny]):
        for i in range(len(node.sequent)):
            out[(loc, i)] = dest[i]
        for k, m in enumerate(prem_to_conc_maps(node)):
            pdest: list[Destiny] = []
            for i, c in enumerate(m):
                pdest.append(("cut", loc) if c is None else dest[c])
            walk(node.premises[k], loc + (k,), pdest)

    walk(pi, (), [("end", i) for i in range(len(pi.sequent))])
    return out


def eigenvariables(pi: Proof) -> tuple[set[Symbol], set[Symbol]]:
    """(EV, EVc): all eigenvariables, and those whose universal inference
    traces down to a cut formula."""
    dest = destinies(pi)
    ev, evc = set(), set()
    for loc, n in all_nodes_of_rule(pi, "all"):
        ev.add(n.var)
        if dest[(loc, n.main)][0] == "cut":
            evc.add(n.var)
    return ev, evc


# ---------------------------------------------------------------------------
# Simplicity


def cut_nodes(pi: Proof):
    return list(all_nodes_of_rule(pi, "cut"))


def _intro_points(pi: Proof, loc: Locator, occ: int, out: list):
    """Collect (locator, rule) of the inferences that introduce the given
    occurrence, tracing upward through contractions and pass-throughs."""
    node = subproof_at(pi, loc)
    if node.rule in ("ax", "top"):
        out.append((loc, node.rule))
        return
    if node.main == occ:
        if node.rule == "cont":
            i, j = node.aux
            _intro_points(pi, loc + (0,), i, out)
            _intro_points(pi, loc + (0,), j, out)
            return
        out.append((loc, node.rule))
        return
    for k, i in conc_to_prem_sources(node, occ):
        _intro_points(pi, loc + (k,), i, out)


def intro_points(pi: Proof, loc: Locator, occ: int) -> list[tuple[Locator, str]]:
    out: list[tuple[Locator, str]] = []
    _intro_points(pi, loc, occ, out)
    return out


def is_simple(pi: Proof) -> Diagnostic | bool:
    """True, or a diagnostic naming the offending cut.

    A cut is admissible when its formula is quantifier-free, or has the shape
    (ex x B) against (all x ~B) with B quantifier-free where every
    non-weakening introduction of the universal side is the inference
    directly above the cut premise.
    """
    if not is_regular(pi):
        return Diagnostic((), "proof is not regular")
    for loc, n in cut_nodes(pi):
        il, ir = n.aux
        a = n.premises[0].sequent[il]
        if quantifier_free(a):
            continue
        if isinstance(a, Ex):
            ex_side, all_side, all_occ = 0, 1, ir
        elif isinstance(a, All):
            ex_side, all_side, all_occ = 1, 0, il
        else:
            return Diagnostic(loc, "cut formula is neither quantifier-free nor quantified at the root")
        cut_formula = n.premises[ex_side].sequent[n.aux[ex_side]]
        assert isinstance(cut_formula, Ex)
        if not quantifier_free(cut_formula.body):
            return Diagnostic(loc, "cut formula has a quantifier alternation")
        prem = n.premises[all_side]
        for iloc, irule in intro_points(pi, loc + (all_side,), all_occ):
            if irule == "weak":
                continue
            if irule == "all" and iloc == loc + (all_side,):
                continue
            return Diagnostic(loc, "universal side of the cut is not introduced directly above")
        del prem
    return True


def cut_eigenvariable(pi: Proof, loc: Locator) -> Symbol | None:
    """The eigenvariable of a (simple) quantified cut, if its universal side
    is a real inference directly above."""
    n = subproof_at(pi, loc)
    il, ir = n.aux
    a = n.premises[0].sequent[il]
    if quantifier_free(a):
        return None
    side, occ = (1, ir) if isinstance(a, Ex) else (0, il)
    prem = n.premises[side]
    if prem.rule == "all" and prem.main == occ:
        return prem.var
    return None


def exists_side(pi_cut: Proof) -> tuple[int, int]:
    """(premise index, occurrence) of the existential cut formula."""
    il, ir = pi_cut.aux
    a = pi_cut.premises[0].sequent[il]
    return (0, il) if isinstance(a, Ex) else (1, ir)


# ---------------------------------------------------------------------------
# Herbrand sets and instance tables


FormulaPath = tuple[int, ...]  # 1/2 child steps into a formula tree


@dataclass(frozen=True)
class HElem:
    """One element of a Herbrand set: a quantifier-free matrix (with bot at
    weakened parts) plus the quantifier terms keyed by formula position."""
    matrix: Formula
    table: tuple[tuple[FormulaPath, Term], ...]

    def shifted(self, step: int) -> "HElem":
        return HElem(self.matrix, tuple(((step,) + p, t) for p, t in self.table))


def _helems(pi: Proof) -> dict[int, list[list[HElem]]]:
    memo: dict[int, list[list[HElem]]] = {}

    def go(node: Proof) -> list[list[HElem]]:
        key = id(node)
        if key in memo:
            return memo[key]
        r = node.rule
        if r == "ax":
            res = [[HElem(node.sequent[0], ())], [HElem(node.sequent[1], ())]]
        elif r == "top":
            res = [[HElem(TOP, ())]]
        else:
            prem = [go(p) for p in node.premises]
            res = [None] * len(node.sequent)  # type: ignore[list-item]
            maps = prem_to_conc_maps(node)
            # pass-through occurrences
            for k, m in enumerate(maps):
                for i, c in enumerate(m):
                    if c is None or c == node.main:
                        continue
                    res[c] = prem[k][i]
            if r == "weak":
                res[node.main] = [HElem(BOT, ())]
            elif r == "cont":
                # j-side first: with append-at-end conclusions the j occurrence
                # is the more recently assembled instance, so instances come
                # out in bottom-up creation order.
                i, j = node.aux
                res[node.main] = _dedupe(prem[0][j] + prem[0][i])
            elif r == "or":
                i, j = node.aux
                res[node.main] = _dedupe([
                    HElem(Or(a.matrix, b.matrix),
                          a.shifted(1).table + b.shifted(2).table)
                    for a in prem[0][i] for b in prem[0][j]])
            elif r == "and":
                il, ir = node.aux
                res[node.main] = _dedupe([
                    HElem(And(a.matrix, b.matrix),
                          a.shifted(1).table + b.shifted(2).table)
                    for a in prem[0][il] for b in prem[1][ir]])
            elif r == "ex":
                res[node.main] = [HElem(e.matrix, (((), node.witness),) + e.shifted(1).table)
                                  for e in prem[0][node.main]]
            elif r == "all":
                res[node.main] = [HElem(e.matrix, (((), Term(node.var)),) + e.shifted(1).table)
                                  for e in prem[0][node.main]]
            elif r == "cut":
                pass  # all occurrences are pass-through
        memo[key] = res
        return res

    go(pi)
    return memo


def _dedupe(elems: list[HElem]) -> list[HElem]:
    return list(dict.fromkeys(elems))


def occurrence_helems(pi: Proof) -> list[list[HElem]]:
    """Herbrand elements per end-sequent occurrence, in instance order."""
    memo = _helems(pi)
    return memo[id(pi)]


def herbrand_set(pi: Proof) -> set[Formula]:
    out: set[Formula] = set()
    for elems in occurrence_helems(pi):
        out |= {e.matrix for e in elems}
    return out


def herbrand_multiset(pi: Proof) -> dict[Formula, int]:
    """Multiset variant: no collapsing at contractions or products."""

    def go(node: Proof) -> list[list[Formula]]:
        r = node.rule
        if r == "ax":
            return [[node.sequent[0]], [node.sequent[1]]]
        if r == "top":
            return [[TOP]]
        prem = [go(p) for p in node.premises]
        res: list[list[Formula]] = [None] * len(node.sequent)  # type: ignore[list-item]
        for k, m in enumerate(prem_to_conc_maps(node)):
            for i, c in enumerate(m):
                if c is None or c == node.main:
                    continue
                res[c] = prem[k][i]
        if r == "weak":
            res[node.main] = [BOT]
        elif r == "cont":
            i, j = node.aux
            res[node.main] = prem[0][j] + prem[0][i]
        elif r == "or":
            i, j = node.aux
            res[node.main] = [Or(a, b) for a in prem[0][i] for b in prem[0][j]]
        elif r == "and":
            il, ir = node.aux
            res[node.main] = [And(a, b) for a in prem[0][il] for b in prem[1][ir]]
        elif r in ("ex", "all"):
            res[node.main] = prem[0][node.main]
        return res

    counts: dict[Formula, int] = {}
    for occ in go(pi):
        for f in occ:
            counts[f] = counts.get(f, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# terms(Q)


def formula_at(pi: Proof, path: OccurrencePath) -> Formula:
    loc, occ = path
    node = subproof_at(pi, loc)
    if not 0 <= occ < len(node.sequent):
        raise ProofError(f"occurrence {occ} out of range at {loc}")
    return node.sequent[occ]


def terms_of(pi: Proof, path: OccurrencePath) -> set[Term]:
    """Witness terms associated with an occurrence of an existential formula."""
    if not isinstance(formula_at(pi, path), Ex):
        raise ProofError("occurrence is not an existential formula")

    def go(loc: Locator, occ: int) -> set[Term]:
        node = subproof_at(pi, loc)
        if node.main == occ:
            if node.rule == "weak":
                return set()
            if node.rule == "ex":
                return {node.witness}
            if node.rule == "cont":
                i, j = node.aux
                return go(loc + (0,), i) | go(loc + (0,), j)
        out: set[Term] = set()
        for k, i in conc_to_prem_sources(node, occ):
            out |= go(loc + (k,), i)
        return out

    return go(*path)


def b_substitutions(pi: Proof) -> set[tuple[Symbol, Term]]:
    """The cut-witness substitution pairs: one (alpha, t) per eigenvariable of
    a quantified cut and witness t of its existential side."""
    simple = is_simple(pi)
    if simple is not True:
        raise ProofError(f"proof is not simple: {simple.reason}")
    out: set[tuple[Symbol, Term]] = set()
    for loc, n in cut_nodes(pi):
        alpha = cut_eigenvariable(pi, loc)
        if alpha is None:
            continue
        k, occ = exists_side(n)
        for t in terms_of(pi, (loc + (k,), occ)):
            out.add((alpha, t))
    return out


# ---------------------------------------------------------------------------
# Relative positions of inferences


def relative_position(pi: Proof, r1: Locator, r2: Locator) -> str:
    subproof_at(pi, r1), subproof_at(pi, r2)  # validate
    if r1 == r2:
        return "same"
    if _prefix(r1, r2):
        return "ancestor-line"
    if _prefix(r2, r1):
        node = subproof_at(pi, r2)
        if len(node.premises) == 2:
            return "left-above" if r1[len(r2)] == 0 else "right-above"
        return "ancestor-line"
    return "parallel"


# ---------------------------------------------------------------------------
# Renaming, substitution, canonical equality


def map_proof_formulas(pi: Proof, fmap, tmap) -> Proof:
    """Rebuild a proof applying fmap to every formula and tmap to every
    witness term (rule structure and indices unchanged)."""
    prem = tuple(map_proof_formulas(p, fmap, tmap) for p in pi.premises)
    return Proof(pi.rule, prem, tuple(fmap(f) for f in pi.sequent), pi.main,
                 pi.aux, pi.var, tmap(pi.witness) if pi.witness is not None else None,
                 fmap(pi.formula) if pi.formula is not None else None)


def subst_proof(pi: Proof, sigma: Subst) -> Proof:
    dom = {s for s, _ in sigma.pairs}
    for _, n in all_nodes_of_rule(pi, "all"):
        if n.var in dom:
            raise ProofError(f"substitution touches eigenvariable {n.var.name}")
    return map_proof_formulas(pi, lambda f: subst_formula(f, sigma),
                              lambda t: subst_term(t, sigma))


def rename_eigenvariables(pi: Proof, mapping: dict[Symbol, Symbol]) -> Proof:
    sigma = Subst.of({s: Term(v) for s, v in mapping.items()})
    prem = tuple(rename_eigenvariables(p, mapping) for p in pi.premises)
    v = mapping.get(pi.var, pi.var) if pi.var is not None else None
    return Proof(pi.rule, prem, tuple(subst_formula(f, sigma) for f in pi.sequent),
                 pi.main, pi.aux, v,
                 subst_term(pi.witness, sigma) if pi.witness is not None else None,
                 subst_formula(pi.formula, sigma) if pi.formula is not None else None)


def proof_var_names(pi: Proof) -> set[str]:
    names: set[str] = set()
    for _, n in iter_nodes(pi):
        if n.var is not None:
            names.add(n.var.name)
        for s in _symbols_of_node(n):
            names.add(s.name)
    return names


def canonical_eigen_form(pi: Proof) -> Proof:
    """Rename eigenvariables e1, e2, ... by preorder traversal; used for
    structural proof equality in tests."""
    order: list[Symbol] = []
    for _, n in iter_nodes(pi):
        if n.rule == "all" and n.var not in order:
            order.append(n.var)
    mapping = {v: var(f"e{i + 1}") for i, v in enumerate(order)}
    return rename_eigenvariables(pi, mapping)


def proofs_equal_canonical(p1: Proof, p2: Proof) -> bool:
    return canonical_eigen_form(p1) == canonical_eigen_form(p2)


# ---------------------------------------------------------------------------
# Text format


def print_proof(pi: Proof) -> str:
    lines: list[str] = []
    counter = [0]

    def go(node: Proof) -> str:
        prem_names = [go(p) for p in node.premises]
        name = f"n{counter[0]}"
        counter[0] += 1
        r = node.rule
        if r == "ax":
            body = f"(ax {formula_str(node.sequent[0])})"
        elif r == "top":
            body = "(top)"
        elif r == "weak":
            body = f"(weak {prem_names[0]} {formula_str(node.sequent[-1])})"
        elif r == "cont":
            body = f"(cont {prem_names[0]} {node.aux[0]} {node.aux[1]})"
        elif r == "cut":
            body = f"(cut {prem_names[0]} {prem_names[1]} {node.aux[0]} {node.aux[1]})"
        elif r == "or":
            body = f"(or {prem_names[0]} {node.aux[0]} {node.aux[1]})"
        elif r == "and":
            body = f"(and {prem_names[0]} {prem_names[1]} {node.aux[0]} {node.aux[1]})"
        elif r == "all":
            body = f"(all {prem_names[0]} {node.main} {node.var.name}"
            if abstract_all(node.premises[0].sequent[node.main], Term(node.var), "all") != node.formula:
                body += f" {formula_str(node.formula)}"
            body += ")"
        elif r == "ex":
            body = f"(ex {prem_names[0]} {node.main} {term_str(node.witness)}"
            if abstract_all(node.premises[0].sequent[node.main], node.witness, "ex") != node.formula:
                body += f" {formula_str(node.formula)}"
            body += ")"
        else:
            raise ProofError(f"unknown rule {r}")
        lines.append(f"{name} = {body}")
        return name

    go(pi)
    return "\n".join(lines) + "\n"


def parse_proof(text: str) -> Proof:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    # first pass: eigenvariable names from all-nodes
    eigen_names: set[str] = set()
    for ln in lines:
        toks = tokenize(ln.split("=", 1)[1] if "=" in ln else ln)
        if len(toks) >= 5 and toks[0] == "(" and toks[1] == "all":
            eigen_names.add(toks[4])  # (all <premise> <index> <var> ...)
    defined: dict[str, Proof] = {}
    last = None
    for lineno, ln in enumerate(lines, start=1):
        if "=" not in ln:
            raise ProofError(f"line {lineno}: expected 'name = (rule ...)'")
        name, rhs = (s.strip() for s in ln.split("=", 1))
        try:
            node = _parse_proof_line(rhs, defined, eigen_names)
        except SyntaxError_ as e:
            raise ProofError(f"line {lineno}: {e}") from e
        defined[name] = node
        last = node
    if last is None:
        raise ProofError("empty proof text")
    return last


def _parse_proof_line(rhs: str, defined: dict[str, Proof], eigen_names: set[str]) -> Proof:
    cur = _Cursor(tokenize(rhs))
    cur.expect("(")
    rule = cur.next()

    def ref() -> Proof:
        tok = cur.next()
        if tok not in defined:
            raise ProofError(f"unknown premise reference {tok!r}")
        return defined[tok]

    def num() -> int:
        tok = cur.next()
        if not tok.isdigit():
            raise ProofError(f"expected an index, got {tok!r}")
        return int(tok)

    def rest_formula() -> Formula:
        toks = []
        depth = 0
        while not (depth == 0 and cur.peek() == ")"):
            t = cur.next()
            if t == "(":
                depth += 1
            elif t == ")":
                depth -= 1
            toks.append(t)
        return parse_formula(_untokenize(toks), variables=eigen_names)

    def rest_term_or_formula() -> tuple[Term, Formula | None]:
        toks = [cur.next()]
        if cur.peek() == "(":
            depth = 0
            while True:
                tk = cur.next()
                toks.append(tk)
                if tk == "(":
                    depth += 1
                elif tk == ")":
                    depth -= 1
                    if depth == 0:
                        break
        t = parse_term(_untokenize(toks), variables=eigen_names)
        if cur.peek() == ")":
            return t, None
        toks = []
        depth = 0
        while not (depth == 0 and cur.peek() == ")"):
            tk = cur.next()
            if tk == "(":
                depth += 1
            elif tk == ")":
                depth -= 1
            toks.append(tk)
        return t, parse_formula(_untokenize(toks), variables=eigen_names)

    if rule == "ax":
        f = rest_formula()
        cur.expect(")")
        return ax(f)
    if rule == "top":
        cur.expect(")")
        return top_intro()
    if rule == "weak":
        p = ref()
        f = rest_formula()
        cur.expect(")")
        return weak(p, f)
    if rule == "cont":
        p, i, j = ref(), num(), num()
        cur.expect(")")
        return cont(p, i, j)
    if rule == "cut":
        l, r_, i, j = ref(), ref(), num(), num()
        cur.expect(")")
        return cut(l, r_, i, j)
    if rule == "or":
        p, i, j = ref(), num(), num()
        cur.expect(")")
        return or_intro(p, i, j)
    if rule == "and":
        l, r_, i, j = ref(), ref(), num(), num()
        cur.expect(")")
        return and_intro(l, r_, i, j)
    if rule == "all":
        p, i = ref(), num()
        vname = cur.next()
        fm = None
        if cur.peek() != ")":
            fm = rest_formula()
        cur.expect(")")
        return forall_intro(p, i, var(vname), fm)
    if rule == "ex":
        p, i = ref(), num()
        t, fm = rest_term_or_formula()
        cur.expect(")")
        return exists_intro(p, i, t, fm)
    raise ProofError(f"unknown rule {rule!r}")


def _untokenize(toks: list[str]) -> str:
    out = []
    for i, t in enumerate(toks):
        if i and t not in "(),;" and toks[i - 1] not in "(,":
            out.append(" ")
        out.append(t)
    return "".join(out)


# ---------------------------------------------------------------------------
# Hash, JSON


def proof_hash(pi: Proof) -> str:
    return hashlib.sha256(print_proof(pi).encode()).hexdigest()[:16]


def proof_json(pi: Proof) -> dict:
    counter = [0]

    def go(node: Proof) -> dict:
        prem = [go(p) for p in node.premises]
        d = {
            "id": counter[0],
            "rule": node.rule,
            "sequent": [formula_str(f) for f in node.sequent],
            "premises": prem,
        }
        counter[0] += 1
        if node.main is not None:
            d["main"] = node.main
        if node.aux:
            d["aux"] = list(node.aux)
        if node.var is not None:
            d["var"] = node.var.name
        if node.witness is not None:
            d["witness"] = term_str(node.witness)
        if node.formula is not None:
            d["formula"] = formula_str(node.formula)
        return d

    return go(pi)


def proof_json_str(pi: Proof) -> str:
    return json.dumps(proof_json(pi), sort_keys=True, indent=1)
