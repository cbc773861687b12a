"""First-order terms, NNF formulas, sequents and substitutions.

Formulas are in negation normal form by construction: negation exists only as
the polarity flag of literals.  Bound variables are renamed to canonical names
(x0, x1, ... in depth-first order of the quantifiers) whenever a formula is
built through the `mk_*` constructors or `canon`, so alpha-equivalent formulas
compare equal.  All values are immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union


class Kind(Enum):
    FN = "function"
    VAR = "variable"   # eigenvariables, canonical variables
    BOUND = "bound"    # quantifier-bound variables


@dataclass(frozen=True, slots=True)
class Symbol:
    name: str
    arity: int = 0
    kind: Kind = Kind.FN

    def __repr__(self) -> str:
        return f"{self.name}/{self.arity}:{self.kind.value[0]}"


def fn(name: str, arity: int = 0) -> Symbol:
    return Symbol(name, arity, Kind.FN)


def var(name: str) -> Symbol:
    return Symbol(name, 0, Kind.VAR)


def bound(name: str) -> Symbol:
    return Symbol(name, 0, Kind.BOUND)


class SyntaxError_(Exception):
    """Raised for malformed terms, substitution errors, position errors."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, slots=True)
class Term:
    head: Symbol
    args: tuple["Term", ...] = ()

    def __post_init__(self):
        if len(self.args) != self.head.arity:
            raise SyntaxError_(
                f"arity mismatch: {self.head!r} applied to {len(self.args)} arguments")

    def __repr__(self) -> str:
        return term_str(self)


def T(name: str, *args: Term) -> Term:
    """Build a function-kind term; arity inferred from the arguments."""
    return Term(fn(name, len(args)), tuple(args))


def V(name: str) -> Term:
    """Eigenvariable / free-variable term."""
    return Term(var(name))


Position = tuple[int, ...]  # 1-based child indices; () is the root


def positions(t: Term) -> Iterator[Position]:
    yield ()
    for i, a in enumerate(t.args, start=1):
        for p in positions(a):
            yield (i,) + p


def subterm_at(t: Term, p: Position) -> Term:
    """Subterm of t at position p; raises if p is not a position of t."""
    for i in p:
        if not 1 <= i <= len(t.args):
            raise SyntaxError_(f"position out of range: {tuple(p)} in {t}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    i = p[0]
    if not 1 <= i <= len(t.args):
        raise SyntaxError_(f"position out of range: {tuple(p)} in {t}")
    new_args = t.args[: i - 1] + (replace_at(t.args[i - 1], p[1:], s),) + t.args[i:]
    return Term(t.head, new_args)


def term_symbols(t: Term) -> set[Symbol]:
    out = {t.head}
    for a in t.args:
        out |= term_symbols(a)
    return out


def term_vars(t: Term) -> set[Symbol]:
    return {s for s in term_symbols(t) if s.kind is Kind.VAR}


def term_str(t: Term) -> str:
    if not t.args:
        return t.head.name
    return f"{t.head.name}({','.join(term_str(a) for a in t.args)})"


# ---------------------------------------------------------------------------
# Formulas (NNF)


@dataclass(frozen=True, slots=True)
class Lit:
    name: str
    args: tuple[Term, ...] = ()
    positive: bool = True

    def __repr__(self):
        return formula_str(self)


@dataclass(frozen=True, slots=True)
class Top:
    def __repr__(self):
        return "top"


@dataclass(frozen=True, slots=True)
class Bot:
    def __repr__(self):
        return "bot"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"

    def __repr__(self):
        return formula_str(self)


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __repr__(self):
        return formula_str(self)


@dataclass(frozen=True, slots=True)
class Ex:
    v: Symbol
    body: "Formula"

    def __repr__(self):
        return formula_str(self)


@dataclass(frozen=True, slots=True)
class All:
    v: Symbol
    body: "Formula"

    def __repr__(self):
        return formula_str(self)


Formula = Union[Lit, Top, Bot, And, Or, Ex, All]

TOP = Top()
BOT = Bot()

Sequent = tuple[Formula, ...]


def formula_str(f: Formula) -> str:
    match f:
        case Lit(name, args, positive):
            sign = "" if positive else "~"
            if not args:
                return f"{sign}{name}"
            return f"{sign}{name}({','.join(term_str(a) for a in args)})"
        case Top():
            return "top"
        case Bot():
            return "bot"
        case And(a, b):
            return f"(and {formula_str(a)} {formula_str(b)})"
        case Or(a, b):
            return f"(or {formula_str(a)} {formula_str(b)})"
        case Ex(v, b):
            return f"(ex {v.name} {formula_str(b)})"
        case All(v, b):
            return f"(all {v.name} {formula_str(b)})"
    raise SyntaxError_(f"not a formula: {f!r}")


def sequent_str(seq: Sequent) -> str:
    return "; ".join(formula_str(f) for f in seq)


# ---------------------------------------------------------------------------
# Canonical bound-variable naming

def canon(f: Formula) -> Formula:
    """Rename bound variables to x0, x1, ... in depth-first preorder."""
    counter = [0]

    def go(g: Formula, env: dict[Symbol, Symbol]) -> Formula:
        match g:
            case Lit(name, args, positive):
                return Lit(name, tuple(_rename_term(a, env) for a in args), positive)
            case Top() | Bot():
                return g
            case And(a, b):
                return And(go(a, env), go(b, env))
            case Or(a, b):
                return Or(go(a, env), go(b, env))
            case Ex(v, b):
                nv = bound(f"x{counter[0]}")
                counter[0] += 1
                return Ex(nv, go(b, {**env, v: nv}))
            case All(v, b):
                nv = bound(f"x{counter[0]}")
                counter[0] += 1
                return All(nv, go(b, {**env, v: nv}))
        raise SyntaxError_(f"not a formula: {g!r}")

    return go(f, {})


def _rename_term(t: Term, env: dict[Symbol, Symbol]) -> Term:
    if t.head in env:
        return Term(env[t.head])
    return Term(t.head, tuple(_rename_term(a, env) for a in t.args))


def mk_and(a: Formula, b: Formula) -> Formula:
    return canon(And(a, b))


def mk_or(a: Formula, b: Formula) -> Formula:
    return canon(Or(a, b))


def mk_ex(v: Symbol, body: Formula) -> Formula:
    return canon(Ex(v, body))


def mk_all(v: Symbol, body: Formula) -> Formula:
    return canon(All(v, body))


# ---------------------------------------------------------------------------
# Structural queries


def dual(f: Formula) -> Formula:
    """De Morgan dual; an involution on NNF formulas."""
    match f:
        case Lit(name, args, positive):
            return Lit(name, args, not positive)
        case Top():
            return BOT
        case Bot():
            return TOP
        case And(a, b):
            return Or(dual(a), dual(b))
        case Or(a, b):
            return And(dual(a), dual(b))
        case Ex(v, b):
            return All(v, dual(b))
        case All(v, b):
            return Ex(v, dual(b))
    raise SyntaxError_(f"not a formula: {f!r}")


def quantifier_free(f: Formula) -> bool:
    match f:
        case Lit() | Top() | Bot():
            return True
        case And(a, b) | Or(a, b):
            return quantifier_free(a) and quantifier_free(b)
        case _:
            return False


def formula_terms(f: Formula) -> Iterator[Term]:
    match f:
        case Lit(_, args, _):
            yield from args
        case And(a, b) | Or(a, b):
            yield from formula_terms(a)
            yield from formula_terms(b)
        case Ex(_, b) | All(_, b):
            yield from formula_terms(b)


def formula_symbols(f: Formula) -> set[Symbol]:
    out: set[Symbol] = set()
    for t in formula_terms(f):
        out |= term_symbols(t)
    return out


def formula_vars(f: Formula) -> set[Symbol]:
    return {s for s in formula_symbols(f) if s.kind is Kind.VAR}


def bound_vars(f: Formula) -> set[Symbol]:
    match f:
        case Lit() | Top() | Bot():
            return set()
        case And(a, b) | Or(a, b):
            return bound_vars(a) | bound_vars(b)
        case Ex(v, b) | All(v, b):
            return {v} | bound_vars(b)
    raise SyntaxError_(f"not a formula: {f!r}")


def occurs_in_formula(s: Symbol, f: Formula) -> bool:
    return any(s in term_symbols(t) for t in formula_terms(f))


def occurs_in_sequent(s: Symbol, seq: Sequent) -> bool:
    return any(occurs_in_formula(s, f) for f in seq)


def is_weak(seq: Sequent) -> bool:
    """True iff no formula of the sequent contains a universal quantifier."""

    def has_forall(f: Formula) -> bool:
        match f:
            case All():
                return True
            case And(a, b) | Or(a, b):
                return has_forall(a) or has_forall(b)
            case Ex(_, b):
                return has_forall(b)
            case _:
                return False

    return not any(has_forall(f) for f in seq)


# ---------------------------------------------------------------------------
# Substitution


class SubstError(SyntaxError_):
    pass


@dataclass(frozen=True)
class Subst:
    """Simultaneous substitution from variable symbols to terms."""

    pairs: tuple[tuple[Symbol, Term], ...]

    @staticmethod
    def of(mapping: dict[Symbol, Term] | None = None, **kw) -> "Subst":
        m = dict(mapping or {})
        for k, v_ in kw.items():
            m[var(k)] = v_
        return Subst(tuple(sorted(m.items(), key=lambda p: p[0].name)))

    def as_dict(self) -> dict[Symbol, Term]:
        return dict(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)


EMPTY_SUBST = Subst(())


def subst_term(t: Term, sigma: Subst) -> Term:
    m = sigma.as_dict()

    def go(u: Term) -> Term:
        if u.head in m and not u.args:
            return m[u.head]
        return Term(u.head, tuple(go(a) for a in u.args))

    return go(t)


def subst_formula(f: Formula, sigma: Subst) -> Formula:
    """Apply sigma to f.  Raises SubstError on bound-variable clashes:
    substituting for a bound variable, or a range term that would be captured.
    """
    m = sigma.as_dict()
    if not m:
        return f

    def go(g: Formula) -> Formula:
        match g:
            case Lit(name, args, positive):
                return Lit(name, tuple(subst_term(a, sigma) for a in args), positive)
            case Top() | Bot():
                return g
            case And(a, b):
                return And(go(a), go(b))
            case Or(a, b):
                return Or(go(a), go(b))
            case Ex(v, b) | All(v, b):
                if v in m:
                    raise SubstError(f"cannot substitute for bound variable {v.name}")
                for src, tgt in m.items():
                    if occurs_in_formula(src, b) and v in term_symbols(tgt):
                        raise SubstError(
                            f"capture of bound variable {v.name} by [{src.name}\\{tgt}]")
                nb = go(b)
                return Ex(v, nb) if isinstance(g, Ex) else All(v, nb)
        raise SyntaxError_(f"not a formula: {g!r}")

    return go(f)


def apply_subst(x, sigma: Subst):
    """Apply a substitution to a Term or a Formula."""
    if isinstance(x, Term):
        return subst_term(x, sigma)
    return subst_formula(x, sigma)


def instantiate(f: Formula, v: Symbol, t: Term) -> Formula:
    """Replace the bound variable v (free in f's body) by term t: A[x\\t]."""

    def go(g: Formula) -> Formula:
        match g:
            case Lit(name, args, positive):
                return Lit(name, tuple(_put(a) for a in args), positive)
            case Top() | Bot():
                return g
            case And(a, b):
                return And(go(a), go(b))
            case Or(a, b):
                return Or(go(a), go(b))
            case Ex(w, b):
                return g if w == v else Ex(w, go(b))
            case All(w, b):
                return g if w == v else All(w, go(b))
        raise SyntaxError_(f"not a formula: {g!r}")

    def _put(u: Term) -> Term:
        if u.head == v and not u.args:
            return t
        return Term(u.head, tuple(_put(a) for a in u.args))

    return go(f)


# ---------------------------------------------------------------------------
# The <= relation of the weakening-as-bottom comparison


class NotQuantifierFree(SyntaxError_):
    pass


def _require_qf(f: Formula):
    if not quantifier_free(f):
        raise NotQuantifierFree(f"expected quantifier-free formula: {f}")


def leq_formula(a: Formula, b: Formula) -> bool:
    """bot <= B for every B; B <= B; congruence through conjunction and
    disjunction.  Defined on quantifier-free formulas only."""
    _require_qf(a)
    _require_qf(b)
    return _leq(a, b)


def _leq(a: Formula, b: Formula) -> bool:
    if isinstance(a, Bot):
        return True
    if a == b:
        return True
    match a, b:
        case (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)):
            return _leq(a1, b1) and _leq(a2, b2)
        case _:
            return False


def leq_formula_set(A, B) -> bool:
    """Every member of A is <= some member of B."""
    A, B = list(A), list(B)
    for f in A:
        _require_qf(f)
    for f in B:
        _require_qf(f)
    return all(any(_leq(a, b) for b in B) for a in A)
