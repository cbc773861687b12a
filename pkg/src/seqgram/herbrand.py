"""Instances of end-sequent formulas with position bookkeeping, the
dependency relation, Herbrand-disjunction validation, Skolemization and
deskolemization, and canonical variable renaming.

A quantifier of the sequent Gamma = F_1, ..., F_n is addressed as (i, j):
formula index i (1-based) and quantifier index j in depth-first preorder of
F_i.  A tuple (i, j, k) addresses the term used for quantifier j in the k-th
instance of F_i.
"""

from __future__ import annotations

from dataclasses import dataclass

from .proofs import FormulaPath, Proof, ProofError, occurrence_helems
from .syntax import (
    All, And, Bot, Ex, Formula, Kind, Lit, Or, Sequent, Symbol, SyntaxError_,
    Term, Top, canon, formula_str, instantiate, subst_formula, Subst,
    term_str, term_symbols, var,
)
from .tautology import is_tautology


class HerbrandError(SyntaxError_):
    pass


# ---------------------------------------------------------------------------
# Quantifier addressing


@dataclass(frozen=True)
class QuantInfo:
    index: int                  # j, 1-based, depth-first preorder
    kind: str                   # 'ex' | 'all'
    path: FormulaPath           # position of the quantifier node in the formula
    var: Symbol                 # the bound variable (canonical)
    dominators: tuple[int, ...]  # indices of enclosing quantifiers, outermost first


def quantifier_positions(f: Formula) -> tuple[QuantInfo, ...]:
    out: list[QuantInfo] = []

    def go(g: Formula, path: FormulaPath, enclosing: tuple[int, ...]):
        match g:
            case Ex(v, b):
                j = len(out) + 1
                out.append(QuantInfo(j, "ex", path, v, enclosing))
                go(b, path + (1,), enclosing + (j,))
            case All(v, b):
                j = len(out) + 1
                out.append(QuantInfo(j, "all", path, v, enclosing))
                go(b, path + (1,), enclosing + (j,))
            case And(a, b) | Or(a, b):
                go(a, path + (1,), enclosing)
                go(b, path + (2,), enclosing)
            case _:
                pass

    go(f, (), ())
    return tuple(out)


# ---------------------------------------------------------------------------
# Instances


@dataclass(frozen=True)
class Instance:
    formula_index: int                       # i, 1-based
    matrix: Formula                          # quantifier-free, bot at erased parts
    table: tuple[tuple[int, Term], ...]      # (j, term); missing j = erased

    def entry(self, j: int) -> Term | None:
        for jj, t in self.table:
            if jj == j:
                return t
        return None


@dataclass(frozen=True)
class InstanceSet:
    sequent: Sequent
    instances: tuple[Instance, ...]

    def quantifiers(self, i: int) -> tuple[QuantInfo, ...]:
        return quantifier_positions(self.sequent[i - 1])

    def instances_of_formula(self, i: int) -> tuple[Instance, ...]:
        return tuple(inst for inst in self.instances if inst.formula_index == i)

    def entry(self, i: int, j: int, k: int) -> Term | None:
        return self.instances_of_formula(i)[k - 1].entry(j)

    def formulas(self) -> set[Formula]:
        return {inst.matrix for inst in self.instances}


def instances_of(pi: Proof, formula_indices: tuple[int, ...] | None = None,
                 reference_sequent: Sequent | None = None) -> InstanceSet:
    """Reconstruct the instance tables from the proof's existential witnesses
    and universal eigenvariables.

    Reduction steps may permute end-sequent occurrences; passing
    `formula_indices` (1-based reference index per occurrence) and the
    reference sequent keeps the (i, j, k) addressing stable across a
    reduction sequence."""
    seq = reference_sequent if reference_sequent is not None else pi.sequent
    if formula_indices is None:
        formula_indices = tuple(range(1, len(pi.sequent) + 1))
    qinfos = [quantifier_positions(f) for f in pi.sequent]
    instances: list[Instance] = []
    for occ, elems in enumerate(occurrence_helems(pi)):
        path_to_j = {q.path: q.index for q in qinfos[occ]}
        for e in elems:
            table = []
            for p, t in e.table:
                if p not in path_to_j:
                    raise HerbrandError(
                        f"quantifier event at {p} does not match formula {occ + 1}")
                table.append((path_to_j[p], t))
            table.sort(key=lambda jt: jt[0])
            instances.append(Instance(formula_indices[occ], e.matrix, tuple(table)))
    order = sorted(range(len(instances)), key=lambda x: instances[x].formula_index)
    return InstanceSet(seq, tuple(instances[x] for x in order))


# ---------------------------------------------------------------------------
# Dependency relation


PositionId = tuple[int, int, int]  # (i, j, k)


def _dominates(I: InstanceSet, p1: PositionId, p2: PositionId) -> bool:
    i1, j1, k1 = p1
    i2, j2, k2 = p2
    if i1 != i2 or k1 != k2:
        return False
    q2 = next(q for q in I.quantifiers(i2) if q.index == j2)
    return j1 in q2.dominators


def positions_of_kind(I: InstanceSet, kind: str) -> list[PositionId]:
    out = []
    for i in range(1, len(I.sequent) + 1):
        qs = I.quantifiers(i)
        for k, inst in enumerate(I.instances_of_formula(i), start=1):
            for q in qs:
                if q.kind == kind and inst.entry(q.index) is not None:
                    out.append((i, q.index, k))
    return out


@dataclass(frozen=True)
class DependencyRelation:
    precedes: frozenset[tuple[PositionId, PositionId]]       # the one-step relation
    depends: frozenset[tuple[PositionId, PositionId]]        # transitive closure

    def acyclic(self) -> bool:
        return not any(a == b for a, b in self.depends)


def dependency(I: InstanceSet) -> DependencyRelation:
    ex_positions = positions_of_kind(I, "ex")
    all_positions = positions_of_kind(I, "all")
    prec: set[tuple[PositionId, PositionId]] = set()
    for p2 in ex_positions:
        i2, j2, k2 = p2
        t2 = I.entry(i2, j2, k2)
        vars2 = {s for s in term_symbols(t2) if s.kind is Kind.VAR}
        for p3 in all_positions:
            i3, j3, k3 = p3
            t3 = I.entry(i3, j3, k3)
            if t3.args or t3.head not in vars2:
                continue
            for p1 in ex_positions:
                if _dominates(I, p1, p3):
                    prec.add((p1, p2))
    closure = set(prec)
    changed = True
    while changed:
        changed = False
        new = {(a, c) for (a, b) in closure for (b2, c) in closure if b == b2}
        if not new <= closure:
            closure |= new
            changed = True
    return DependencyRelation(frozenset(prec), frozenset(closure))


def is_herbrand_disjunction(I: InstanceSet) -> bool | str:
    """True, or a string naming the failed condition."""
    dep = dependency(I)
    if not dep.acyclic():
        return "dependency relation is cyclic"
    if not is_tautology(I.formulas()):
        return "disjunction of instances is not a tautology"
    return True


# ---------------------------------------------------------------------------
# Skolemization of sequents


@dataclass(frozen=True)
class SkolemMap:
    sequent: Sequent                                     # the original sequent
    entries: tuple[tuple[tuple[int, int], Symbol], ...]  # ((i, j), symbol)

    def symbol_for(self, i: int, j: int) -> Symbol:
        for (ii, jj), s in self.entries:
            if (ii, jj) == (i, j):
                return s
        raise HerbrandError(f"no Skolem symbol for quantifier ({i},{j})")

    def info(self, name: str) -> tuple[int, int] | None:
        for (i, j), s in self.entries:
            if s.name == name:
                return (i, j)
        return None

    def to_json(self) -> dict:
        return {
            "sequent": [formula_str(f) for f in self.sequent],
            "symbols": [{"i": i, "j": j, "name": s.name, "arity": s.arity}
                        for (i, j), s in self.entries],
        }

    @staticmethod
    def from_json(d: dict) -> "SkolemMap":
        from .parsing import parse_formula
        seq = tuple(parse_formula(s) for s in d["sequent"])
        entries = tuple(((e["i"], e["j"]), Symbol(e["name"], e["arity"]))
                        for e in d["symbols"])
        return SkolemMap(seq, entries)


def skolemize_formula(f: Formula, i: int) -> tuple[Formula, list[tuple[tuple[int, int], Symbol]]]:
    entries: list[tuple[tuple[int, int], Symbol]] = []
    counter = [0]

    def go(g: Formula, ex_stack: tuple[Term, ...]) -> Formula:
        match g:
            case Ex(v, b):
                counter[0] += 1
                return Ex(v, go(b, ex_stack + (Term(v),)))
            case All(v, b):
                counter[0] += 1
                j = counter[0]
                sym = Symbol(f"f_{i}_{j}", len(ex_stack))
                entries.append(((i, j), sym))
                body = go(b, ex_stack)
                return instantiate(body, v, Term(sym, ex_stack))
            case And(a, b):
                return And(go(a, ex_stack), go(b, ex_stack))
            case Or(a, b):
                return Or(go(a, ex_stack), go(b, ex_stack))
            case _:
                return g

    return canon(go(f, ())), entries


def skolemize_sequent(seq: Sequent) -> tuple[Sequent, SkolemMap]:
    out = []
    entries: list[tuple[tuple[int, int], Symbol]] = []
    for i, f in enumerate(seq, start=1):
        g, es = skolemize_formula(f, i)
        out.append(g)
        entries.extend(es)
    return tuple(out), SkolemMap(seq, tuple(entries))


# ---------------------------------------------------------------------------
# Skolemization of proofs


def skolemize_proof(pi: Proof) -> tuple[Proof, SkolemMap, Subst]:
    """Remove the universal quantifiers of end-sequent formulas, replacing
    their eigenvariables by Skolem terms over the dominating existential
    witnesses; cut quantifiers stay untouched and void rules are dropped.
    Also returns the substitution sending each removed eigenvariable to its
    Skolem term."""
    from .proofs import (ax, cont, cut, exists_intro, forall_intro, or_intro,
                         and_intro, prem_to_conc_maps, top_intro, weak)

    _, skmap = skolemize_sequent(pi.sequent)
    qinfos = [quantifier_positions(f) for f in pi.sequent]
    path_to_q = [{q.path: q for q in qs} for qs in qinfos]
    sigma: dict[Symbol, Term] = {}

    def sub_term(t: Term) -> Term:
        if t.head in sigma and not t.args:
            return sigma[t.head]
        return Term(t.head, tuple(sub_term(a) for a in t.args))

    def sub_formula(f: Formula) -> Formula:
        match f:
            case Lit(name, args, positive):
                return Lit(name, tuple(sub_term(a) for a in args), positive)
            case Top() | Bot():
                return f
            case And(a, b):
                return And(sub_formula(a), sub_formula(b))
            case Or(a, b):
                return Or(sub_formula(a), sub_formula(b))
            case Ex(v, b):
                return Ex(v, sub_formula(b))
            case All(v, b):
                return All(v, sub_formula(b))
        raise HerbrandError(f"not a formula: {f!r}")

    def strip(f: Formula, i: int, path: FormulaPath, inst: dict[int, Term]) -> Formula:
        """Remove end-sequent universal quantifiers inside an occurrence of
        the subformula of F_i at `path`, with `inst` holding the terms of the
        quantifiers already introduced below."""
        match f:
            case Lit() | Top() | Bot():
                return f
            case And(a, b):
                return And(strip(a, i, path + (1,), inst),
                           strip(b, i, path + (2,), inst))
            case Or(a, b):
                return Or(strip(a, i, path + (1,), inst),
                          strip(b, i, path + (2,), inst))
            case Ex(v, b):
                q = path_to_q[i - 1][path]
                inner = dict(inst)
                inner[q.index] = Term(v)
                return Ex(v, strip(b, i, path + (1,), inner))
            case All(v, b):
                q = path_to_q[i - 1][path]
                args = _dominator_args(qinfos[i - 1], q, inst)
                body = strip(b, i, path + (1,), inst)
                return instantiate(body, v, Term(skmap.symbol_for(i, q.index), args))
        raise HerbrandError(f"not a formula: {f!r}")

    def tr(f: Formula, ctx) -> Formula:
        if ctx is None:
            return canon(sub_formula(f))
        i, path, inst = ctx
        return canon(sub_formula(strip(f, i, path, inst)))

    def walk(node: Proof, ctxs: list) -> Proof:
        r = node.rule
        maps = prem_to_conc_maps(node)

        def premise_ctxs(k: int, overrides: dict[int, object]) -> list:
            out = []
            for idx, c in enumerate(maps[k]):
                if idx in overrides:
                    out.append(overrides[idx])
                elif c is None:
                    out.append(None)
                else:
                    out.append(ctxs[c])
            return out

        if r == "ax":
            return ax(tr(node.sequent[0], ctxs[0]))
        if r == "top":
            return top_intro()
        if r == "weak":
            p = walk(node.premises[0], premise_ctxs(0, {}))
            return weak(p, tr(node.sequent[-1], ctxs[-1]))
        if r == "cont":
            i, j = node.aux
            p = walk(node.premises[0], premise_ctxs(0, {}))
            return cont(p, i, j)
        if r == "cut":
            il, ir = node.aux
            left = walk(node.premises[0], premise_ctxs(0, {il: None}))
            right = walk(node.premises[1], premise_ctxs(1, {ir: None}))
            return cut(left, right, il, ir)
        if r == "or":
            i, j = node.aux
            ctx = ctxs[node.main]
            if ctx is None:
                over: dict[int, object] = {i: None, j: None}
            else:
                fi, path, inst = ctx
                over = {i: (fi, path + (1,), inst), j: (fi, path + (2,), inst)}
            p = walk(node.premises[0], premise_ctxs(0, over))
            return or_intro(p, i, j)
        if r == "and":
            il, ir = node.aux
            ctx = ctxs[node.main]
            if ctx is None:
                lover: object = None
                rover: object = None
            else:
                fi, path, inst = ctx
                lover = (fi, path + (1,), inst)
                rover = (fi, path + (2,), inst)
            left = walk(node.premises[0], premise_ctxs(0, {il: lover}))
            right = walk(node.premises[1], premise_ctxs(1, {ir: rover}))
            return and_intro(left, right, il, ir)
        if r == "ex":
            ctx = ctxs[node.main]
            new_wit = sub_term(node.witness)
            if ctx is None:
                over = {node.main: None}
            else:
                fi, path, inst = ctx
                q = path_to_q[fi - 1][path]
                inner = dict(inst)
                inner[q.index] = new_wit
                over = {node.main: (fi, path + (1,), inner)}
            fm = tr(node.formula, ctx)
            p = walk(node.premises[0], premise_ctxs(0, over))
            return exists_intro(p, node.main, new_wit, fm)
        if r == "all":
            ctx = ctxs[node.main]
            if ctx is None:  # cut quantifier: stays
                fm = tr(node.formula, None)
                p = walk(node.premises[0], premise_ctxs(0, {node.main: None}))
                return forall_intro(p, node.main, node.var, fm)
            fi, path, inst = ctx
            q = path_to_q[fi - 1][path]
            args = _dominator_args(qinfos[fi - 1], q, inst)
            skterm = Term(skmap.symbol_for(fi, q.index), args)
            sigma[node.var] = skterm
            inner = dict(inst)
            inner[q.index] = skterm
            over = {node.main: (fi, path + (1,), inner)}
            return walk(node.premises[0], premise_ctxs(0, over))  # void rule
        raise ProofError(f"unknown rule {r}")

    root_ctxs = [(i + 1, (), {}) for i in range(len(pi.sequent))]
    out = walk(pi, root_ctxs)
    return out, skmap, Subst.of(sigma)


def _dominator_args(qs: tuple[QuantInfo, ...], q: QuantInfo,
                    inst: dict[int, Term]) -> tuple[Term, ...]:
    args = []
    for j in q.dominators:
        info = next(x for x in qs if x.index == j)
        if info.kind != "ex":
            continue
        if j not in inst:
            raise HerbrandError(
                f"dominating existential quantifier {j} not yet instantiated")
        args.append(inst[j])
    return tuple(args)


# ---------------------------------------------------------------------------
# Skolemization / deskolemization of instances


def _closed_var_map(raw: dict[Symbol, Term]) -> dict[Symbol, Term]:
    """Iterate a variable -> term map until its values are stable."""
    out = dict(raw)
    for _ in range(len(out) + 1):
        sigma = Subst.of(out)
        new = {}
        changed = False
        for v, t in out.items():
            from .syntax import subst_term
            nt_ = subst_term(t, sigma)
            new[v] = nt_
            if nt_ != t:
                changed = True
        out = new
        if not changed:
            return out
    raise HerbrandError("cyclic variable dependencies; cannot close the renaming")


def skolemize_instances(I: InstanceSet, skmap: SkolemMap | None = None) -> set[Formula]:
    """Replace every universal-position variable by its Skolem term over the
    dominating existential terms; duplicates collapse."""
    if skmap is None:
        _, skmap = skolemize_sequent(I.sequent)
    raw: dict[Symbol, Term] = {}
    for i in range(1, len(I.sequent) + 1):
        qs = I.quantifiers(i)
        for inst in I.instances_of_formula(i):
            for q in qs:
                if q.kind != "all":
                    continue
                t = inst.entry(q.index)
                if t is None:
                    continue
                if t.args or t.head.kind is not Kind.VAR:
                    raise HerbrandError(
                        f"universal position ({i},{q.index}) carries non-variable {t}")
                args = []
                for j in q.dominators:
                    info = next(x for x in qs if x.index == j)
                    if info.kind != "ex":
                        continue
                    d = inst.entry(j)
                    if d is None:
                        raise HerbrandError(
                            f"missing dominating existential term for ({i},{q.index})")
                    args.append(d)
                skterm = Term(skmap.symbol_for(i, q.index), tuple(args))
                if t.head in raw and raw[t.head] != skterm:
                    raise HerbrandError(
                        f"variable {t.head.name} has two distinct Skolem terms")
                raw[t.head] = skterm
    closed = _closed_var_map(raw)
    sigma = Subst.of(closed)
    return {subst_formula(inst.matrix, sigma) for inst in I.instances}


def _mangle(t: Term) -> str:
    return term_str(t).replace("(", "<").replace(")", ">").replace(",", ".")


def canonical_variable(i: int, j: int, args: tuple[Term, ...]) -> Symbol:
    name = f"a_{i}_{j}" + "".join("__" + _mangle(t) for t in args)
    return var(name)


def deskolemize_instances(formulas, skmap: SkolemMap) -> set[Formula]:
    """Replace maximal Skolem terms by canonical variables, outermost first,
    rewriting Skolem terms inside the variable-name indices recursively."""
    known = {s.name: (i, j) for (i, j), s in skmap.entries}

    def desk_term(t: Term) -> Term:
        if t.head.name in known and t.head.arity == len(t.args):
            i, j = known[t.head.name]
            return Term(canonical_variable(i, j, tuple(desk_term(a) for a in t.args)))
        return Term(t.head, tuple(desk_term(a) for a in t.args))

    def desk_formula(f: Formula) -> Formula:
        match f:
            case Lit(name, args, positive):
                return Lit(name, tuple(desk_term(a) for a in args), positive)
            case Top() | Bot():
                return f
            case And(a, b):
                return And(desk_formula(a), desk_formula(b))
            case Or(a, b):
                return Or(desk_formula(a), desk_formula(b))
            case Ex(v, b):
                return Ex(v, desk_formula(b))
            case All(v, b):
                return All(v, desk_formula(b))
        raise HerbrandError(f"not a formula: {f!r}")

    return {desk_formula(f) for f in formulas}


# ---------------------------------------------------------------------------
# Canonical renaming


def canonical_rename(I: InstanceSet) -> set[Formula]:
    """Apply the canonical variable renaming: every universal-position
    variable is renamed to a name built from its formula and quantifier index
    and the (canonically renamed) dominating existential terms.  Variables
    with equal data are identified; a variable that would need two different
    canonical names is an error."""
    raw: dict[Symbol, tuple[int, int, tuple[Term, ...]]] = {}
    for i in range(1, len(I.sequent) + 1):
        qs = I.quantifiers(i)
        for inst in I.instances_of_formula(i):
            for q in qs:
                if q.kind != "all":
                    continue
                t = inst.entry(q.index)
                if t is None:
                    continue
                if t.args or t.head.kind is not Kind.VAR:
                    raise HerbrandError(
                        f"universal position ({i},{q.index}) carries non-variable {t}")
                args = []
                for j in q.dominators:
                    info = next(x for x in qs if x.index == j)
                    if info.kind != "ex":
                        continue
                    d = inst.entry(j)
                    if d is None:
                        raise HerbrandError(
                            f"missing dominating existential term for ({i},{q.index})")
                    args.append(d)
                data = (i, q.index, tuple(args))
                if t.head in raw and raw[t.head] != data:
                    raise HerbrandError(
                        f"variable {t.head.name} is not canonicalizable: "
                        f"two distinct position data")
                raw[t.head] = data
    # names embed the dominating terms, which may mention other renamed
    # variables: iterate to the fixpoint (acyclicity bounds the depth)
    from .syntax import subst_term
    mapping: dict[Symbol, Term] = {}
    for _ in range(len(raw) + 2):
        sigma = Subst.of(mapping)
        new = {v: Term(canonical_variable(i, j, tuple(subst_term(a, sigma) for a in args)))
               for v, (i, j, args) in raw.items()}
        if new == mapping:
            break
        mapping = new
    else:
        if raw:
            raise HerbrandError("cyclic dominating terms; renaming does not stabilize")
    sigma = Subst.of(mapping)
    return {subst_formula(inst.matrix, sigma) for inst in I.instances}


# ---------------------------------------------------------------------------
# Matching formulas back to instances


def match_instance(f: Formula, pattern: Formula) -> dict[Symbol, Term] | None:
    """Match an instance formula against a sequent formula, treating bot in
    the instance as matching anything and binding the pattern's quantified
    variables to the terms found at their positions."""
    bindings: dict[Symbol, Term] = {}

    def terms_match(u: Term, w: Term) -> bool:
        if u.head.kind is Kind.BOUND and not u.args:
            if u.head in bindings:
                return bindings[u.head] == w
            bindings[u.head] = w
            return True
        if u.head != w.head:
            return False
        return all(terms_match(a, b) for a, b in zip(u.args, w.args))

    def go(g: Formula, p: Formula) -> bool:
        if isinstance(g, Bot) and not isinstance(p, Bot):
            return True  # erased part
        match p:
            case Lit(name, args, positive):
                return (isinstance(g, Lit) and g.name == name
                        and g.positive == positive and len(g.args) == len(args)
                        and all(terms_match(u, w) for u, w in zip(args, g.args)))
            case Top():
                return isinstance(g, Top)
            case Bot():
                return isinstance(g, Bot)
            case And(a, b):
                return isinstance(g, And) and go(g.left, a) and go(g.right, b)
            case Or(a, b):
                return isinstance(g, Or) and go(g.left, a) and go(g.right, b)
            case Ex(_, b) | All(_, b):
                return go(g, b)
        raise HerbrandError(f"not a formula: {p!r}")

    return bindings if go(f, pattern) else None


def parse_instances(formulas, seq: Sequent) -> InstanceSet:
    """View a set of quantifier-free formulas as instances of a sequent by
    structural matching (first matching formula wins)."""
    instances = []
    for f in sorted(formulas, key=formula_str):
        matched = False
        for i, pattern in enumerate(seq, start=1):
            b = match_instance(f, pattern)
            if b is None:
                continue
            qs = quantifier_positions(pattern)
            table = tuple(sorted(
                ((q.index, b[q.var]) for q in qs if q.var in b),
                key=lambda jt: jt[0]))
            instances.append(Instance(i, f, table))
            matched = True
            break
        if not matched:
            raise HerbrandError(f"formula matches no sequent member: {formula_str(f)}")
    return InstanceSet(seq, tuple(instances))
