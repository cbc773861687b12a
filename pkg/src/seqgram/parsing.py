"""Text syntax for terms, formulas and sequents.

Terms:     f(t1,...,tn), constants and variables as bare identifiers.
Formulas:  P(t...) and ~P(t...) for literals, (and A B), (or A B),
           (ex x A), (all x A), top, bot.
Sequents:  formulas joined by ';'.

Printing produces canonical output (canonical bound names, single spaces)
and parse/print round-trips bit-exactly on canonical output.
"""

from __future__ import annotations

import re

from .syntax import (
    BOT, TOP, Formula, Kind, Lit, Sequent, Symbol, SyntaxError_, Term, bound,
    canon, fn, formula_str, sequent_str, term_str, var,
)

RESERVED = {"and", "or", "ex", "all", "top", "bot"}

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(,)|(;)|(~?[A-Za-z0-9_.<>'*+-]+))")


class ParseError(SyntaxError_):
    pass


def tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"cannot tokenize at: {rest[:30]!r}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self, ahead: int = 0) -> str | None:
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> str:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return t

    def expect(self, t: str):
        got = self.next()
        if got != t:
            raise ParseError(f"expected {t!r}, got {got!r}")

    def done(self) -> bool:
        return self.i >= len(self.toks)


def _is_ident(tok: str) -> bool:
    return bool(tok) and tok not in "(),;"


def parse_term(text: str, variables: set[str] | None = None) -> Term:
    cur = _Cursor(tokenize(text))
    t = _term(cur, variables or set(), set())
    if not cur.done():
        raise ParseError(f"trailing input after term: {cur.peek()!r}")
    return t


def _term(cur: _Cursor, variables: set[str], bound_env: set[str]) -> Term:
    tok = cur.next()
    if not _is_ident(tok) or tok.startswith("~") or tok in RESERVED:
        raise ParseError(f"expected a term, got {tok!r}")
    if cur.peek() == "(":
        cur.next()
        args = [_term(cur, variables, bound_env)]
        while cur.peek() == ",":
            cur.next()
            args.append(_term(cur, variables, bound_env))
        cur.expect(")")
        return Term(fn(tok, len(args)), tuple(args))
    if tok in bound_env:
        return Term(bound(tok))
    if tok in variables:
        return Term(var(tok))
    return Term(fn(tok))


def parse_formula(text: str, variables: set[str] | None = None) -> Formula:
    cur = _Cursor(tokenize(text))
    f = _formula(cur, variables or set(), set())
    if not cur.done():
        raise ParseError(f"trailing input after formula: {cur.peek()!r}")
    return canon(f)


def _formula(cur: _Cursor, variables: set[str], bound_env: set[str]) -> Formula:
    tok = cur.peek()
    if tok == "(":
        cur.next()
        head = cur.next()
        if head in ("and", "or"):
            a = _formula(cur, variables, bound_env)
            b = _formula(cur, variables, bound_env)
            cur.expect(")")
            from .syntax import And, Or
            return And(a, b) if head == "and" else Or(a, b)
        if head in ("ex", "all"):
            vname = cur.next()
            if not _is_ident(vname):
                raise ParseError(f"expected a variable name, got {vname!r}")
            body = _formula(cur, variables, bound_env | {vname})
            cur.expect(")")
            from .syntax import All, Ex
            v = bound(vname)
            return Ex(v, body) if head == "ex" else All(v, body)
        raise ParseError(f"unknown connective {head!r}")
    tok = cur.next()
    if tok == "top":
        return TOP
    if tok == "bot":
        return BOT
    if not _is_ident(tok):
        raise ParseError(f"expected a formula, got {tok!r}")
    positive = not tok.startswith("~")
    name = tok if positive else tok[1:]
    if name in RESERVED or not name:
        raise ParseError(f"reserved word used as predicate: {tok!r}")
    args: list[Term] = []
    # A following '(' opens an argument list only when it cannot start a
    # sibling formula (terms never begin with a connective keyword).
    if cur.peek() == "(" and cur.peek(1) not in RESERVED:
        cur.next()
        args.append(_term(cur, variables, bound_env))
        while cur.peek() == ",":
            cur.next()
            args.append(_term(cur, variables, bound_env))
        cur.expect(")")
    return Lit(name, tuple(args), positive)


def parse_sequent(text: str, variables: set[str] | None = None) -> Sequent:
    parts = [p.strip() for p in text.split(";")]
    parts = [p for p in parts if p]
    return tuple(parse_formula(p, variables) for p in parts)


def print_term(t: Term) -> str:
    return term_str(t)


def print_formula(f: Formula) -> str:
    return formula_str(f)


def print_sequent(seq: Sequent) -> str:
    return sequent_str(seq)


def retag_variables(t: Term, names: set[str]) -> Term:
    """Re-tag nullary function symbols whose names appear in `names` as
    variable-kind symbols.  Used after parsing, once eigenvariable names
    are known."""
    if t.head.kind is Kind.FN and not t.args and t.head.name in names:
        return Term(var(t.head.name))
    return Term(t.head, tuple(retag_variables(a, names) for a in t.args))


def retag_formula_variables(f: Formula, names: set[str]) -> Formula:
    from .syntax import All, And, Bot, Ex, Or, Top
    match f:
        case Lit(name, args, positive):
            return Lit(name, tuple(retag_variables(a, names) for a in args), positive)
        case Top() | Bot():
            return f
        case And(a, b):
            return And(retag_formula_variables(a, names), retag_formula_variables(b, names))
        case Or(a, b):
            return Or(retag_formula_variables(a, names), retag_formula_variables(b, names))
        case Ex(v, b):
            return Ex(v, retag_formula_variables(b, names))
        case All(v, b):
            return All(v, retag_formula_variables(b, names))
    raise SyntaxError_(f"not a formula: {f!r}")
