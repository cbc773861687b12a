"""The cut-reduction rewrite system.

Step kinds (each with its mirror, `side` naming the premise whose rule is
active): axiom, quantifier, propositional, contraction, weakening, and the
unary/binary permutations.  Non-erasing mode omits the weakening step.

Every step preserves the end-sequent as a multiset but may permute
occurrence order, so each local rewrite returns an index permutation that is
threaded down to the root while re-indexing ancestor rules.

After a binary permutation that moves a cut into the universal-side premise
of a quantified cut, the displaced universal inference is permuted down in
the same call, so every proof in a reduction sequence stays simple.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .proofs import (
    Locator, Proof, ProofError, all_locators, and_intro, conc_to_prem_sources,
    cont, cut, cut_nodes, exists_intro, forall_intro, is_simple, or_intro,
    prem_to_conc_maps, print_proof, proof_size, proof_var_names,
    rename_eigenvariables, subproof_at, subst_proof, weak,
)
from .syntax import (
    All, Ex, Formula, Subst, Symbol, Term, occurs_in_sequent, quantifier_free,
    var,
)

KINDS = ("axiom", "weakening", "quantifier", "propositional",
         "unary-perm", "binary-perm", "contraction")
_KIND_PRIORITY = {k: i for i, k in enumerate(KINDS)}

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True, order=True)
class Redex:
    locator: Locator
    kind: str
    side: int = 0            # premise whose rule drives the step
    branch: int = 0          # binary-perm: premise of r holding the ancestor


@dataclass(frozen=True)
class Strategy:
    policy: str = "leftmost-innermost"
    seed: int = 0
    script: tuple[int, ...] = ()
    budget: int = DEFAULT_BUDGET
    size_cap: int | None = None   # treat runs whose proofs outgrow this as exhausted

    def __post_init__(self):
        if self.policy not in ("leftmost-innermost", "leftmost-outermost",
                               "rightmost-uppermost", "random", "scripted"):
            raise ValueError(f"unknown policy {self.policy!r}")


@dataclass(frozen=True)
class TraceStep:
    redex: Redex
    size: int
    hash: str


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[TraceStep, ...]
    status: str                   # 'normal-form' | 'budget-exhausted'
    cycled: bool = False
    # original end-sequent occurrence index -> occurrence index in the result
    end_permutation: tuple[int, ...] = ()


class StaleRedex(ProofError):
    pass


# ---------------------------------------------------------------------------
# Redex enumeration


def find_redexes(pi: Proof, mode: str = "full") -> list[Redex]:
    """All Figure-style redexes, canonically ordered.  mode 'noerase' omits
    the weakening step."""
    if mode not in ("full", "noerase"):
        raise ValueError(f"unknown mode {mode!r}")
    simple = is_simple(pi)
    if simple is not True:
        raise ProofError(f"proof is not simple: {simple.reason}")
    out: list[Redex] = []
    for loc, n in cut_nodes(pi):
        out.extend(_cut_redexes(pi, loc, n, mode))
    return sorted(out, key=_canonical_key)


def _canonical_key(r: Redex):
    return (r.locator, _KIND_PRIORITY[r.kind], r.side, r.branch)


def _cut_redexes(pi: Proof, loc: Locator, n: Proof, mode: str) -> list[Redex]:
    out = []
    quantifier_added = False
    propositional_added = False
    for s in (0, 1):
        prem = n.premises[s]
        a = n.aux[s]
        if prem.rule == "ax":
            out.append(Redex(loc, "axiom", s))
            continue
        if prem.rule == "top":
            continue  # no reduction from the top side
        if prem.main == a:
            r = prem.rule
            if r == "weak":
                if mode == "full":
                    out.append(Redex(loc, "weakening", s))
            elif r == "cont":
                out.append(Redex(loc, "contraction", s))
            elif r == "ex":
                other = n.premises[1 - s]
                if other.rule == "all" and other.main == n.aux[1 - s] \
                        and not quantifier_added:
                    out.append(Redex(loc, "quantifier", s))
                    quantifier_added = True
            elif r == "and":
                other = n.premises[1 - s]
                if other.rule == "or" and other.main == n.aux[1 - s] \
                        and not propositional_added:
                    out.append(Redex(loc, "propositional", s))
                    propositional_added = True
            # 'or' главная and 'all' main: handled from the partner side
        else:
            r = prem.rule
            if r in ("weak", "cont", "or", "ex", "all"):
                if r == "all" and occurs_in_sequent(prem.var, n.premises[1 - s].sequent):
                    continue  # the moved quantifier would capture; not a redex
                out.append(Redex(loc, "unary-perm", s))
            elif r in ("and", "cut"):
                sources = conc_to_prem_sources(prem, a)
                for b, _ in sources:
                    out.append(Redex(loc, "binary-perm", s, b))
    return out


# ---------------------------------------------------------------------------
# Step application


def apply_step_with_perm(pi: Proof, r: Redex) -> tuple[Proof, dict[int, int]]:
    """Apply one reduction step (plus the forced follow-up permutation when
    needed).  Returns the rewritten proof and the permutation mapping old
    end-sequent occurrence indices to new ones: steps preserve the
    end-sequent as a multiset but may reorder it."""
    node = subproof_at(pi, r.locator)
    if node.rule != "cut":
        raise StaleRedex(f"locator {r.locator} is not a cut")
    new, perm = _build_step(pi, node, r)
    return _graft(pi, r.locator, new, perm)


def apply_step(pi: Proof, r: Redex) -> Proof:
    return apply_step_with_perm(pi, r)[0]


def _build_step(pi: Proof, n: Proof, r: Redex) -> tuple[Proof, dict[int, int]]:
    if r.kind == "axiom":
        return _axiom_step(n, r.side)
    if r.kind == "quantifier":
        return _quantifier_step(n, r.side)
    if r.kind == "propositional":
        return _propositional_step(n, r.side)
    if r.kind == "contraction":
        return _contraction_step(pi, n, r.side)
    if r.kind == "weakening":
        return _weakening_step(n, r.side)
    if r.kind == "unary-perm":
        return _unary_perm_step(n, r.side)
    if r.kind == "binary-perm":
        return _binary_perm_step(n, r.side, r.branch)
    raise StaleRedex(f"unknown step kind {r.kind!r}")


def _check(cond: bool, why: str):
    if not cond:
        raise StaleRedex(why)


def _axiom_step(n: Proof, s: int) -> tuple[Proof, dict[int, int]]:
    prem = n.premises[s]
    _check(prem.rule == "ax", "axiom step needs an axiom premise")
    a = n.aux[s]
    other_occ = 1 - a
    keep = n.premises[1 - s]
    keep_aux = n.aux[1 - s]
    _check(prem.sequent[other_occ] == keep.sequent[keep_aux],
           "axiom partner does not match the cut formula")
    nl = len(n.premises[0].sequent)
    perm: dict[int, int] = {}
    if s == 1:
        # old conclusion: (L minus il) ++ (ax other), new = L
        il = n.aux[0]
        for m in range(nl - 1):
            perm[m] = m if m < il else m + 1
        perm[nl - 1] = il
    else:
        # old conclusion: (ax other) ++ (R minus ir), new = R
        ir = n.aux[1]
        nr = len(n.premises[1].sequent)
        perm[0] = ir
        for m in range(nr - 1):
            perm[1 + m] = m if m < ir else m + 1
    return keep, perm


def _quantifier_step(n: Proof, s: int) -> tuple[Proof, dict[int, int]]:
    exn = n.premises[s]
    alln = n.premises[1 - s]
    _check(exn.rule == "ex" and exn.main == n.aux[s], "existential side mismatch")
    _check(alln.rule == "all" and alln.main == n.aux[1 - s], "universal side mismatch")
    t = exn.witness
    sub = subst_proof(alln.premises[0], Subst.of({alln.var: t}))
    if s == 0:
        new = cut(exn.premises[0], sub, n.aux[0], n.aux[1])
    else:
        new = cut(sub, exn.premises[0], n.aux[0], n.aux[1])
    return new, {m: m for m in range(len(n.sequent))}


def _propositional_step(n: Proof, s: int) -> tuple[Proof, dict[int, int]]:
    andn = n.premises[s]
    orn = n.premises[1 - s]
    _check(andn.rule == "and" and andn.main == n.aux[s], "conjunction side mismatch")
    _check(orn.rule == "or" and orn.main == n.aux[1 - s], "disjunction side mismatch")
    l1, l2 = andn.premises
    ial, iar = andn.aux
    r1 = orn.premises[0]
    ja, jb = orn.aux
    glen = len(l1.sequent) - 1   # |Gamma|
    dlen = len(l2.sequent) - 1   # |Delta|
    plen = len(r1.sequent) - 2   # |Pi|
    inner = cut(l1, r1, ial, ja)
    jb_inner = glen + (jb if jb < ja else jb - 1)
    outer = cut(l2, inner, iar, jb_inner)
    # old conclusion: Gamma ++ Delta ++ Pi  (s=0)  /  Pi ++ Gamma ++ Delta (s=1)
    # new conclusion: Delta ++ Gamma ++ Pi
    perm: dict[int, int] = {}
    if s == 0:
        for g in range(glen):
            perm[g] = dlen + g
        for dd in range(dlen):
            perm[glen + dd] = dd
        for pp in range(plen):
            perm[glen + dlen + pp] = glen + dlen + pp
    else:
        for pp in range(plen):
            perm[pp] = glen + dlen + pp
        for g in range(glen):
            perm[plen + g] = dlen + g
        for dd in range(dlen):
            perm[plen + glen + dd] = dd
    return outer, perm


def _fresh_names(pi: Proof, count: int, used: set[str]) -> list[str]:
    names = []
    k = 0
    taken = proof_var_names(pi) | used
    while len(names) < count:
        k += 1
        cand = f"v{k}"
        if cand not in taken:
            names.append(cand)
            taken.add(cand)
    return names


def _freshened(pi: Proof, sub: Proof, used: set[str]) -> Proof:
    evs = sorted({n_.var for _, n_ in _all_nodes(sub)}, key=lambda v: v.name)
    fresh = _fresh_names(pi, len(evs), used)
    used.update(fresh)
    return rename_eigenvariables(sub, {v: var(f) for v, f in zip(evs, fresh)})


def _all_nodes(p: Proof):
    from .proofs import all_nodes_of_rule
    return all_nodes_of_rule(p, "all")


def _contraction_step(pi: Proof, n: Proof, s: int) -> tuple[Proof, dict[int, int]]:
    contn = n.premises[s]
    _check(contn.rule == "cont" and contn.main == n.aux[s], "contraction side mismatch")
    i, j = contn.aux
    p1 = contn.premises[0]
    other = n.premises[1 - s]
    used: set[str] = set()
    copy1 = _freshened(pi, other, used)
    copy2 = _freshened(pi, other, used)
    if s == 0:
        ir = n.aux[1]
        glen = len(p1.sequent) - 2
        dlen = len(other.sequent) - 1
        inner = cut(p1, copy1, i, ir)
        outer = cut(inner, copy2, j - 1, ir)
        out = outer
        for m in range(dlen):
            out = cont(out, glen + m, glen + dlen)
    else:
        il = n.aux[0]
        glen = len(other.sequent) - 1
        dlen = len(p1.sequent) - 2
        inner = cut(copy1, p1, il, i)
        outer = cut(copy2, inner, il, glen + (j - 1))
        out = outer
        for m in range(glen):
            out = cont(out, m, glen)
    return out, {m: m for m in range(len(n.sequent))}


def _weakening_step(n: Proof, s: int) -> tuple[Proof, dict[int, int]]:
    weakn = n.premises[s]
    _check(weakn.rule == "weak" and weakn.main == n.aux[s], "weakening side mismatch")
    base = weakn.premises[0]
    other = n.premises[1 - s]
    other_rest = [f for k, f in enumerate(other.sequent) if k != n.aux[1 - s]]
    out = base
    for f in other_rest:
        out = weak(out, f)
    glen = len(base.sequent)
    dlen = len(other_rest)
    perm: dict[int, int] = {}
    if s == 0:
        for m in range(glen + dlen):
            perm[m] = m
    else:
        for g in range(glen):
            perm[dlen + g] = g
        for dd in range(dlen):
            perm[dd] = glen + dd
    return out, perm


def _unary_perm_step(n: Proof, s: int) -> tuple[Proof, dict[int, int]]:
    prem = n.premises[s]
    a = n.aux[s]
    _check(prem.rule in ("weak", "cont", "or", "ex", "all") and prem.main != a,
           "unary permutation mismatch")
    sources = conc_to_prem_sources(prem, a)
    _check(len(sources) == 1, "ambiguous ancestor for unary permutation")
    (_, p) = sources[0]
    base = prem.premises[0]
    other = n.premises[1 - s]
    if s == 0:
        newcut = cut(base, other, p, n.aux[1])
    else:
        newcut = cut(other, base, n.aux[0], p)
    off = 0 if s == 0 else len(other.sequent) - 1
    # positions of base occurrences in newcut's conclusion
    base_pos = lambda q: off + (q if q < p else q - 1)  # noqa: E731
    r = prem.rule
    if r == "weak":
        node = weak(newcut, prem.sequent[-1])
    elif r == "cont":
        ci, cj = prem.aux
        node = cont(newcut, base_pos(ci), base_pos(cj))
    elif r == "or":
        oi, oj = prem.aux
        node = or_intro(newcut, base_pos(oi), base_pos(oj))
    elif r == "ex":
        node = exists_intro(newcut, base_pos(prem.main), prem.witness, prem.formula)
    else:  # all
        _check(not occurs_in_sequent(prem.var, other.sequent),
               "eigenvariable capture in permutation")
        node = forall_intro(newcut, base_pos(prem.main), prem.var, prem.formula)
    perm = _compose_perm(n, s, prem, p, newcut, node)
    return node, perm


def _compose_perm(n: Proof, s: int, prem: Proof, p: int,
                  newcut: Proof, node: Proof) -> dict[int, int]:
    """Map old cut-conclusion indices to conclusion indices of `node`, the
    re-applied rule above the permuted cut."""
    old_maps = prem_to_conc_maps(n)
    new_inner = prem_to_conc_maps(newcut)
    new_outer = prem_to_conc_maps(node)[0]
    perm: dict[int, int] = {}
    nl = len(n.premises[0].sequent)
    for m in range(len(n.sequent)):
        if (s == 0 and m < nl - 1) or (s == 1 and m >= len(n.sequent) - len(prem.sequent) + 1):
            # occurrence from the permuted premise's conclusion
            o = m if s == 0 else m - (len(n.sequent) - len(prem.sequent) + 1)
            o = o if o < n.aux[s] else o + 1
            if prem.rule in ("weak", "or", "cont", "ex", "all") and o == prem.main \
                    and prem.rule in ("weak", "or"):
                # introduced at prem: lands at node's main
                perm[m] = node.main
                continue
            srcs = conc_to_prem_sources(prem, o)
            q = srcs[0][1]
            pos_in_newcut = (0 if s == 0 else len(n.premises[1 - s].sequent) - 1) \
                + (q if q < p else q - 1)
            perm[m] = new_outer[pos_in_newcut]
        else:
            # occurrence from the untouched premise
            o = m - (nl - 1) if s == 0 else m
            o = o if o < n.aux[1 - s] else o + 1
            if s == 0:
                pos_in_newcut = (len(prem.premises[0].sequent) - 1) \
                    + (o if o < n.aux[1] else o - 1)
            else:
                pos_in_newcut = o if o < n.aux[0] else o - 1
            perm[m] = new_outer[pos_in_newcut]
    return perm


def _binary_perm_step(n: Proof, s: int, b: int) -> tuple[Proof, dict[int, int]]:
    prem = n.premises[s]
    a = n.aux[s]
    _check(prem.rule in ("and", "cut") and prem.main != a, "binary permutation mismatch")
    sources = conc_to_prem_sources(prem, a)
    src = [x for x in sources if x[0] == b]
    _check(len(src) == 1, "ancestor not found in the requested branch")
    p = src[0][1]
    other = n.premises[1 - s]
    moved_sub = prem.premises[b]
    stay_sub = prem.premises[1 - b]
    if s == 0:
        newcut = cut(moved_sub, other, p, n.aux[1])
        moved_off = 0
    else:
        newcut = cut(other, moved_sub, n.aux[0], p)
        moved_off = len(other.sequent) - 1
    pos = lambda q: moved_off + (q if q < p else q - 1)  # noqa: E731
    c1, c2 = prem.aux
    if prem.rule == "and":
        if b == 0:
            node = and_intro(newcut, stay_sub, pos(c1), c2)
        else:
            node = and_intro(stay_sub, newcut, c1, pos(c2))
    else:
        if b == 0:
            node = cut(newcut, stay_sub, pos(c1), c2)
        else:
            node = cut(stay_sub, newcut, c1, pos(c2))
    node, fix_perm = _forced_followup(node, b)
    perm = _binary_perm_perm(n, s, b, prem, p, newcut, node, fix_perm)
    return node, perm


def _forced_followup(node: Proof, b: int) -> tuple[Proof, dict[int, int] | None]:
    """If the permuted rule was a quantified cut whose universal-side premise
    is now the moved cut, hoist the displaced universal inference so the
    result is simple again."""
    if node.rule != "cut":
        return node, None
    c1, c2 = node.aux
    f = node.premises[0].sequent[c1]
    if quantifier_free(f):
        return node, None
    all_side = 1 if isinstance(f, Ex) else 0
    inner = node.premises[all_side]
    if inner.rule != "cut":
        return node, None
    a = node.aux[all_side]
    srcs = conc_to_prem_sources(inner, a)
    if len(srcs) != 1:
        return node, None
    k, q = srcs[0]
    allroot = inner.premises[k]
    if allroot.rule != "all" or allroot.main != q:
        return node, None
    lifted, perm_i = _unary_perm_step(inner, k)
    if all_side == 0:
        fixed = cut(lifted, node.premises[1], perm_i[a], c2)
    else:
        fixed = cut(node.premises[0], lifted, c1, perm_i[a])
    # conclusion mapping: inner conclusion occurrences move by perm_i
    fix_perm: dict[int, int] = {}
    inner_len = len(inner.sequent)
    if all_side == 0:
        for m in range(len(node.sequent)):
            if m < inner_len - 1:
                o = m if m < a else m + 1
                fix_perm[m] = _minus(perm_i[o], perm_i[a])
            else:
                fix_perm[m] = m
    else:
        off = len(node.premises[0].sequent) - 1
        for m in range(len(node.sequent)):
            if m < off:
                fix_perm[m] = m
            else:
                o = (m - off)
                o = o if o < a else o + 1
                fix_perm[m] = off + _minus(perm_i[o], perm_i[a])
    return fixed, fix_perm


def _minus(x: int, removed: int) -> int:
    return x if x < removed else x - 1


def _binary_perm_perm(n: Proof, s: int, b: int, prem: Proof, p: int,
                      newcut: Proof, node: Proof,
                      fix_perm: dict[int, int] | None) -> dict[int, int]:
    """Old cut conclusion index -> conclusion index of the rebuilt node."""
    moved_off = 0 if s == 0 else len(n.premises[1 - s].sequent) - 1
    node_maps = prem_to_conc_maps(node)
    newcut_pos_of_moved = lambda q: moved_off + (q if q < p else q - 1)  # noqa: E731
    newcut_pos_of_other = (
        (lambda o: (len(prem.premises[b].sequent) - 1) + (o if o < n.aux[1] else o - 1))
        if s == 0 else
        (lambda o: o if o < n.aux[0] else o - 1))
    # which premise of `node` is the moved cut
    moved_premise_index = b if prem.rule in ("and", "cut") else 0
    perm: dict[int, int] = {}
    nl = len(n.premises[0].sequent)
    for m in range(len(n.sequent)):
        from_perm_side = (s == 0 and m < nl - 1) or \
            (s == 1 and m >= len(n.sequent) - (len(prem.sequent) - 1))
        if from_perm_side:
            o = m if s == 0 else m - (len(n.sequent) - (len(prem.sequent) - 1))
            o = o if o < n.aux[s] else o + 1
            if o == prem.main and prem.rule == "and":
                perm[m] = node.main
                continue
            (kk, q) = conc_to_prem_sources(prem, o)[0]
            if kk == b:
                pos = newcut_pos_of_moved(q)
                if fix_perm is None:
                    perm[m] = node_maps[moved_premise_index][pos]
                else:
                    perm[m] = fix_perm[node_maps[moved_premise_index][pos]]
            else:
                stay_index = 1 - b
                perm[m] = node_maps[stay_index][q] if fix_perm is None \
                    else fix_perm[node_maps[stay_index][q]]
        else:
            o = m - (nl - 1) if s == 0 else m
            o = o if o < n.aux[1 - s] else o + 1
            pos = newcut_pos_of_other(o)
            perm[m] = node_maps[moved_premise_index][pos] if fix_perm is None \
                else fix_perm[node_maps[moved_premise_index][pos]]
    return perm


# ---------------------------------------------------------------------------
# Grafting a rewritten subproof back into the whole tree


def _graft(pi: Proof, loc: Locator, new: Proof,
           perm: dict[int, int]) -> tuple[Proof, dict[int, int]]:
    if not loc:
        return new, perm
    parent_loc, k = loc[:-1], loc[-1]
    parent = subproof_at(pi, parent_loc)
    node, parent_perm = _rebuild_parent(parent, k, new, perm)
    return _graft(pi, parent_loc, node, parent_perm)


def _rebuild_parent(parent: Proof, k: int, child: Proof,
                    perm: dict[int, int]) -> tuple[Proof, dict[int, int]]:
    r = parent.rule
    if r == "weak":
        node = weak(child, parent.sequent[-1])
    elif r == "cont":
        i, j = parent.aux
        i2, j2 = sorted((perm[i], perm[j]))
        node = cont(child, i2, j2)
    elif r == "or":
        i, j = parent.aux
        node = or_intro(child, perm[i], perm[j])
    elif r == "ex":
        node = exists_intro(child, perm[parent.main], parent.witness, parent.formula)
    elif r == "all":
        node = forall_intro(child, perm[parent.main], parent.var, parent.formula)
    elif r == "and":
        il, ir = parent.aux
        if k == 0:
            node = and_intro(child, parent.premises[1], perm[il], ir)
        else:
            node = and_intro(parent.premises[0], child, il, perm[ir])
    elif r == "cut":
        il, ir = parent.aux
        if k == 0:
            node = cut(child, parent.premises[1], perm[il], ir)
        else:
            node = cut(parent.premises[0], child, il, perm[ir])
    else:
        raise ProofError(f"cannot rebuild parent rule {r}")

    old_maps = prem_to_conc_maps(parent)
    new_maps = prem_to_conc_maps(node)
    parent_perm: dict[int, int] = {}
    for kk, om in enumerate(old_maps):
        for p_old, m in enumerate(om):
            if m is None:
                continue
            p_new = perm[p_old] if kk == k else p_old
            parent_perm[m] = new_maps[kk][p_new]
    if r in ("weak", "or", "and"):
        parent_perm[parent.main] = node.main
    return node, parent_perm


# ---------------------------------------------------------------------------
# Reduction loop


def short_hash(pi: Proof) -> str:
    return hashlib.sha256(print_proof(pi).encode()).hexdigest()[:16]


def _pick(redexes: list[Redex], strategy: Strategy, rng: random.Random,
          step_index: int) -> Redex:
    if strategy.policy == "random":
        return rng.choice(redexes)
    if strategy.policy == "scripted":
        if step_index < len(strategy.script):
            return redexes[strategy.script[step_index] % len(redexes)]
        # after the script: seeded random tail, so scripted runs terminate on
        # inputs where every deterministic position order loops
        return rng.choice(redexes)
    if strategy.policy == "leftmost-innermost":
        return min(redexes, key=lambda r: (-len(r.locator),) + _canonical_key(r))
    if strategy.policy == "leftmost-outermost":
        return min(redexes, key=lambda r: (len(r.locator),) + _canonical_key(r))
    # rightmost-uppermost
    return min(redexes, key=lambda r: (-len(r.locator),
                                       tuple(-i for i in r.locator),
                                       _KIND_PRIORITY[r.kind], -r.side, -r.branch))


def iter_reduction(pi: Proof, strategy: Strategy, mode: str = "full"):
    """Yield (proof_before, redex, proof_after, end_perm) until normal form,
    budget exhaustion, or a repeated state.  end_perm maps occurrence indices
    of proof_before's end-sequent to proof_after's."""
    rng = random.Random(strategy.seed)
    seen = {short_hash(pi)}
    current = pi
    for step_index in range(strategy.budget):
        redexes = find_redexes(current, mode)
        if not redexes:
            return
        r = _pick(redexes, strategy, rng, step_index)
        nxt, perm = apply_step_with_perm(current, r)
        yield current, r, nxt, perm
        if strategy.size_cap is not None and proof_size(nxt) > strategy.size_cap:
            raise _BudgetExhausted(nxt)
        h = short_hash(nxt)
        if h in seen:
            raise _CycleDetected(nxt)
        seen.add(h)
        current = nxt
    raise _BudgetExhausted(current)


class _CycleDetected(Exception):
    def __init__(self, proof):
        self.proof = proof


class _BudgetExhausted(Exception):
    def __init__(self, proof):
        self.proof = proof


def reduce_proof(pi: Proof, strategy: Strategy,
                 mode: str = "full") -> tuple[Proof, ReductionTrace]:
    steps: list[TraceStep] = []
    current = pi
    total = list(range(len(pi.sequent)))
    status, cycled = "normal-form", False
    try:
        for _, r, nxt, perm in iter_reduction(pi, strategy, mode):
            steps.append(TraceStep(r, proof_size(nxt), short_hash(nxt)))
            total = [perm[t] for t in total]
            current = nxt
    except _CycleDetected as e:
        current = e.proof
        steps.append(TraceStep(Redex((), "cycle-detected", 0), proof_size(current),
                               short_hash(current)))
        status, cycled = "budget-exhausted", True
    except _BudgetExhausted as e:
        current = e.proof
        status = "budget-exhausted"
    return current, ReductionTrace(tuple(steps), status, cycled, tuple(total))


def trace_json(trace: ReductionTrace) -> list[dict]:
    return [{
        "step": i,
        "kind": ts.redex.kind,
        "locator": list(ts.redex.locator),
        "side": ts.redex.side,
        "size": ts.size,
        "hash": ts.hash,
    } for i, ts in enumerate(trace.steps)]
