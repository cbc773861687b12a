"""Regular and rigid tree grammars.

A grammar is a set of non-terminals (a subset of which is rigid), a start
symbol, and productions ``beta -> t`` with ``t`` a term over the alphabet and
the non-terminals.  Derivations rewrite one non-terminal occurrence per step;
rigid derivations additionally require that all positions a rigid
non-terminal ever occupied carry identical subterms of the final term.

Totally rigid acyclic grammars have finite languages computable as a
substitution product over a topological order of the non-terminals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .parsing import ParseError, parse_term, tokenize, _Cursor, _is_ident
from .syntax import (
    Position, Symbol, SyntaxError_, Term, positions, replace_at, subterm_at,
    term_str, term_symbols, var,
)

DEFAULT_LANGUAGE_CAP = 10**6

Production = tuple[Symbol, Term]


class GrammarError(SyntaxError_):
    pass


class LanguageCapExceeded(GrammarError):
    def __init__(self, cap: int):
        super().__init__(f"language size exceeds cap {cap}")
        self.cap = cap


@dataclass(frozen=True)
class TreeGrammar:
    nonterminals: frozenset[Symbol]
    rigid: frozenset[Symbol]
    start: Symbol
    productions: tuple[Production, ...]

    def __post_init__(self):
        if self.start not in self.nonterminals:
            raise GrammarError(f"start symbol {self.start.name} not a non-terminal")
        if not self.rigid <= self.nonterminals:
            raise GrammarError("rigid set is not a subset of the non-terminals")
        for lhs, _ in self.productions:
            if lhs not in self.nonterminals:
                raise GrammarError(f"production left side {lhs.name} not a non-terminal")
        if self.nonterminals & self.alphabet():
            raise GrammarError("non-terminals overlap the alphabet")

    def alphabet(self) -> frozenset[Symbol]:
        syms: set[Symbol] = set()
        for _, rhs in self.productions:
            syms |= term_symbols(rhs)
        return frozenset(syms - self.nonterminals)

    def productions_of(self, beta: Symbol) -> tuple[Term, ...]:
        return tuple(rhs for lhs, rhs in self.productions if lhs == beta)

    def totally_rigid(self) -> bool:
        return self.rigid == self.nonterminals


def sort_productions(productions) -> tuple[Production, ...]:
    prods = dict.fromkeys(productions)  # dedupe
    return tuple(sorted(prods, key=lambda p: (p[0].name, term_str(p[1]))))


def grammar(start: Symbol, productions, rigid=None, nonterminals=None) -> TreeGrammar:
    prods = sort_productions(productions)
    nts = set(nonterminals or ()) | {start} | {lhs for lhs, _ in prods}
    if rigid is None:
        rigid = nts  # totally rigid by default
    return TreeGrammar(frozenset(nts), frozenset(rigid), start, prods)


def nt(name: str) -> Symbol:
    return var(name)


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class Step:
    position: Position
    production: Production


@dataclass(frozen=True)
class Derivation:
    start: Symbol
    steps: tuple[Step, ...]


def replay(g: TreeGrammar, d: Derivation) -> list[Term]:
    """Terms t_0 .. t_n of the derivation; raises GrammarError if invalid."""
    if d.start not in g.nonterminals:
        raise GrammarError(f"derivation start {d.start.name} is not a non-terminal")
    t = Term(d.start)
    out = [t]
    prods = set(g.productions)
    for k, step in enumerate(d.steps):
        lhs, rhs = step.production
        if (lhs, rhs) not in prods:
            raise GrammarError(f"step {k}: unknown production {lhs.name} -> {rhs}")
        at = subterm_at(t, step.position)
        if at != Term(lhs):
            raise GrammarError(
                f"step {k}: position {step.position} holds {at}, not {lhs.name}")
        t = replace_at(t, step.position, rhs)
        out.append(t)
    return out


def nt_positions(g: TreeGrammar, d: Derivation) -> dict[Symbol, set[Position]]:
    """All positions each non-terminal occupies somewhere in the derivation."""
    occ: dict[Symbol, set[Position]] = {}
    for t in replay(g, d):
        for p in positions(t):
            s = subterm_at(t, p)
            if s.head in g.nonterminals and not s.args:
                occ.setdefault(s.head, set()).add(p)
    return occ


def is_ground(g: TreeGrammar, t: Term) -> bool:
    return not (term_symbols(t) & g.nonterminals)


@dataclass(frozen=True)
class RigidityViolation:
    beta: Symbol
    p: Position
    q: Position


def check_rigidity(g: TreeGrammar, d: Derivation) -> RigidityViolation | None:
    """None if the derivation satisfies the rigidity condition, else a witness."""
    terms = replay(g, d)
    final = terms[-1]
    if not is_ground(g, final):
        raise GrammarError("derivation does not end in a ground term")
    occ = nt_positions(g, d)
    for beta in sorted(g.rigid, key=lambda s: s.name):
        ps = sorted(occ.get(beta, set()))
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if subterm_at(final, ps[i]) != subterm_at(final, ps[j]):
                    return RigidityViolation(beta, ps[i], ps[j])
    return None


def count_rigidity_violations(g: TreeGrammar, d: Derivation) -> tuple[dict[Symbol, int], int]:
    """Ordered pairs (p1, p2), p1 != p2, of positions of each non-terminal
    whose final subterms differ.  Returns per-non-terminal counts and total."""
    terms = replay(g, d)
    final = terms[-1]
    occ = nt_positions(g, d)
    counts: dict[Symbol, int] = {}
    for beta, ps in occ.items():
        n = 0
        for p in ps:
            for q in ps:
                if p != q and subterm_at(final, p) != subterm_at(final, q):
                    n += 1
        counts[beta] = n
    return counts, sum(counts.values())


def normalize_derivation(g: TreeGrammar, d: Derivation) -> Derivation:
    """Rewrite a rigid-valid derivation so it uses at most one production per
    rigid non-terminal, deriving the same ground term."""
    if check_rigidity(g, d) is not None:
        raise GrammarError("derivation violates rigidity; cannot normalize")
    steps = list(d.steps)
    for beta in sorted(g.rigid, key=lambda s: s.name):
        while True:
            uses = [(i, s) for i, s in enumerate(steps) if s.production[0] == beta]
            prods_used = {s.production for _, s in uses}
            if len(prods_used) <= 1:
                break
            first_i, first = uses[0]
            other = next((i, s) for i, s in uses if s.production != first.production)
            p1, p2 = first.position, other[1].position
            src = [s for s in steps if _is_prefix(p1, s.position)]
            keep = [s for s in steps if not _is_prefix(p2, s.position)]
            moved = [Step(p2 + s.position[len(p1):], s.production) for s in src]
            steps = _reorder(g, d.start, keep + moved)
    out = Derivation(d.start, tuple(steps))
    assert replay(g, out)[-1] == replay(g, d)[-1]
    return out


def _is_prefix(p: Position, q: Position) -> bool:
    return len(p) <= len(q) and q[: len(p)] == p


def _reorder(g: TreeGrammar, start: Symbol, steps: list[Step]) -> list[Step]:
    """Put steps into an applicable order (parents before children)."""
    t = Term(start)
    pending = list(steps)
    out: list[Step] = []
    while pending:
        for k, s in enumerate(pending):
            try:
                if subterm_at(t, s.position) == Term(s.production[0]):
                    t = replace_at(t, s.position, s.production[1])
                    out.append(s)
                    del pending[k]
                    break
            except SyntaxError_:
                continue
        else:
            raise GrammarError("cannot order derivation steps")
    return out


# ---------------------------------------------------------------------------
# Reachability, acyclicity, paths


def reach_one(g: TreeGrammar) -> set[tuple[Symbol, Symbol]]:
    """alpha -> beta in one step: some production alpha -> t with beta in t."""
    rel = set()
    for lhs, rhs in g.productions:
        for s in term_symbols(rhs):
            if s in g.nonterminals:
                rel.add((lhs, s))
    return rel


def transitive_closure(rel: set[tuple[Symbol, Symbol]]) -> set[tuple[Symbol, Symbol]]:
    closure = set(rel)
    changed = True
    while changed:
        changed = False
        new = {(a, c) for (a, b) in closure for (b2, c) in closure if b == b2}
        if not new <= closure:
            closure |= new
            changed = True
    return closure


def reachability(g: TreeGrammar):
    """(one-step, transitive, reflexive-transitive) reachability relations."""
    r1 = reach_one(g)
    rplus = transitive_closure(r1)
    rstar = rplus | {(a, a) for a in g.nonterminals}
    return r1, rplus, rstar


def is_acyclic(g: TreeGrammar) -> bool:
    _, rplus, _ = reachability(g)
    return not any((a, a) in rplus for a in g.nonterminals)


def topological_order(g: TreeGrammar) -> list[Symbol]:
    """Order the non-terminals so alpha before beta whenever alpha reaches beta."""
    if not is_acyclic(g):
        raise GrammarError("grammar is cyclic")
    r1 = reach_one(g)
    preds: dict[Symbol, set[Symbol]] = {a: set() for a in g.nonterminals}
    for a, b in r1:
        preds[b].add(a)
    out: list[Symbol] = []
    remaining = set(g.nonterminals)
    while remaining:
        ready = sorted([a for a in remaining if not (preds[a] & remaining)],
                       key=lambda s: s.name)
        out.append(ready[0])
        remaining.remove(ready[0])
    return out


@dataclass(frozen=True)
class PathG:
    """A path: productions a1 -> t1, ..., an -> tn with a_{i+1} occurring in t_i."""
    productions: tuple[Production, ...]

    def __len__(self):
        return len(self.productions)


def find_paths(g: TreeGrammar, start: Symbol, to=None) -> list[PathG]:
    """All paths beginning with a production of `start`.  With `to` a
    non-terminal, only paths ending in a production of `to`; with `to` a
    term, only paths whose final right-hand side equals it."""
    if not is_acyclic(g):
        raise GrammarError("grammar is cyclic; path set may be infinite")

    out: list[PathG] = []

    def extend(prefix: list[Production], alpha: Symbol):
        for rhs in g.productions_of(alpha):
            path = prefix + [(alpha, rhs)]
            out.append(PathG(tuple(path)))
            for s in sorted(term_symbols(rhs) & g.nonterminals, key=lambda x: x.name):
                extend(path, s)

    extend([], start)
    if to is None:
        return out
    if isinstance(to, Symbol):
        return [p for p in out if p.productions[-1][0] == to]
    return [p for p in out if p.productions[-1][1] == to]


# ---------------------------------------------------------------------------
# Non-terminal elimination (single-production rigid non-terminals)


def eliminate_nonterminal(g: TreeGrammar, beta: Symbol, t: Term | None = None) -> TreeGrammar:
    """Remove a non-start, totally-rigid non-terminal with exactly one
    production beta -> t, substituting t for beta everywhere."""
    if not g.totally_rigid():
        raise GrammarError("eliminate_nonterminal requires a totally rigid grammar")
    if beta == g.start:
        raise GrammarError("cannot eliminate the start symbol")
    prods = g.productions_of(beta)
    if len(prods) != 1:
        raise GrammarError(f"{beta.name} has {len(prods)} productions, need exactly 1")
    if t is not None and prods[0] != t:
        raise GrammarError(f"{beta.name} -> {t} is not the production of {beta.name}")
    t = prods[0]

    def sub(u: Term) -> Term:
        if u.head == beta and not u.args:
            return t
        return Term(u.head, tuple(sub(a) for a in u.args))

    new_prods = sort_productions((lhs, sub(rhs)) for lhs, rhs in g.productions if lhs != beta)
    nts = g.nonterminals - {beta}
    return TreeGrammar(nts, frozenset(nts), g.start, new_prods)


# ---------------------------------------------------------------------------
# Languages


def compute_language(g: TreeGrammar, cap: int = DEFAULT_LANGUAGE_CAP) -> set[Term]:
    """Language of a totally rigid acyclic grammar: the substitution product
    over a topological order.  Terms still containing a production-less
    non-terminal are underivable and dropped."""
    if not g.totally_rigid():
        raise GrammarError("compute_language requires a totally rigid grammar")
    order = topological_order(g)
    terms: set[Term] = {Term(g.start)}
    for alpha in order:
        rhss = g.productions_of(alpha)
        nxt: set[Term] = set()
        for s in terms:
            if alpha in term_symbols(s):
                for rhs in rhss:
                    nxt.add(_sub_all(s, alpha, rhs))
                # no productions: s is underivable, drop it
            else:
                nxt.add(s)
            if len(nxt) > cap:
                raise LanguageCapExceeded(cap)
        terms = nxt
    return {s for s in terms if is_ground(g, s)}


def _sub_all(t: Term, alpha: Symbol, rhs: Term) -> Term:
    if t.head == alpha and not t.args:
        return rhs
    return Term(t.head, tuple(_sub_all(a, alpha, rhs) for a in t.args))


def compute_regular_language(g: TreeGrammar, cap: int = DEFAULT_LANGUAGE_CAP) -> set[Term]:
    """Language under the regular reading: independent choice at every
    non-terminal occurrence."""
    if not is_acyclic(g):
        raise GrammarError("compute_regular_language requires an acyclic grammar")
    memo: dict[Symbol, set[Term]] = {}

    def lang(alpha: Symbol) -> set[Term]:
        if alpha not in memo:
            out: set[Term] = set()
            for rhs in g.productions_of(alpha):
                out |= expand(rhs)
                if len(out) > cap:
                    raise LanguageCapExceeded(cap)
            memo[alpha] = out
        return memo[alpha]

    def expand(t: Term) -> set[Term]:
        if t.head in g.nonterminals and not t.args:
            return lang(t.head)
        arg_sets = [expand(a) for a in t.args]
        out = {Term(t.head)} if not t.args else set()
        stack = [(0, [])]
        while stack:
            i, acc = stack.pop()
            if i == len(arg_sets):
                out.add(Term(t.head, tuple(acc)))
                if len(out) > cap:
                    raise LanguageCapExceeded(cap)
                continue
            for choice in arg_sets[i]:
                stack.append((i + 1, acc + [choice]))
        return out

    return lang(g.start)


def regular_language_size(g: TreeGrammar) -> int:
    """|L| under the regular reading, by counting (no materialization)."""
    if not is_acyclic(g):
        raise GrammarError("requires an acyclic grammar")
    memo: dict[Symbol, int] = {}

    def count_nt(alpha: Symbol) -> int:
        if alpha not in memo:
            memo[alpha] = sum(count_term(rhs) for rhs in g.productions_of(alpha))
        return memo[alpha]

    def count_term(t: Term) -> int:
        if t.head in g.nonterminals and not t.args:
            return count_nt(t.head)
        n = 1
        for a in t.args:
            n *= count_term(a)
        return n

    return count_nt(g.start)


def derigidify(g: TreeGrammar) -> TreeGrammar:
    """The underlying regular grammar: same productions, empty rigid set."""
    return TreeGrammar(g.nonterminals, frozenset(), g.start, g.productions)


# ---------------------------------------------------------------------------
# Text format: `start t; rigid a b; t -> f(a,a); a -> 0 | s(0);`


def print_grammar(g: TreeGrammar) -> str:
    parts = [f"start {g.start.name}"]
    if g.rigid:
        parts.append("rigid " + " ".join(sorted(s.name for s in g.rigid)))
    by_lhs: dict[Symbol, list[Term]] = {}
    for lhs, rhs in g.productions:
        by_lhs.setdefault(lhs, []).append(rhs)
    for lhs in sorted(by_lhs, key=lambda s: s.name):
        alts = " | ".join(term_str(r) for r in by_lhs[lhs])
        parts.append(f"{lhs.name} -> {alts}")
    return "; ".join(parts) + ";"


def parse_grammar(text: str) -> TreeGrammar:
    statements = [s.strip() for s in text.split(";") if s.strip()]
    start_name = None
    rigid_names: list[str] = []
    raw_prods: list[tuple[str, str]] = []
    for st_ in statements:
        if st_.startswith("start "):
            start_name = st_[len("start "):].strip()
        elif st_.startswith("rigid"):
            rigid_names.extend(st_[len("rigid"):].split())
        elif "->" in st_:
            lhs, rhs = st_.split("->", 1)
            for alt in rhs.split("|"):
                raw_prods.append((lhs.strip(), alt.strip()))
        else:
            raise ParseError(f"bad grammar statement: {st_!r}")
    if start_name is None:
        raise ParseError("grammar has no start statement")
    nt_names = {start_name} | set(rigid_names) | {l for l, _ in raw_prods}
    prods = [(nt(l), _parse_nt_term(r, nt_names)) for l, r in raw_prods]
    rigid = {nt(n) for n in rigid_names} if rigid_names else None
    return grammar(nt(start_name), prods, rigid=rigid,
                   nonterminals={nt(n) for n in nt_names})


def _parse_nt_term(text: str, nt_names: set[str]) -> Term:
    cur = _Cursor(tokenize(text))
    t = _g_term(cur, nt_names)
    if not cur.done():
        raise ParseError(f"trailing input in grammar term: {cur.peek()!r}")
    return t


def _g_term(cur: _Cursor, nt_names: set[str]) -> Term:
    tok = cur.next()
    if not _is_ident(tok):
        raise ParseError(f"expected a term, got {tok!r}")
    if cur.peek() == "(":
        cur.next()
        args = [_g_term(cur, nt_names)]
        while cur.peek() == ",":
            cur.next()
            args.append(_g_term(cur, nt_names))
        cur.expect(")")
        return Term(Symbol(tok, len(args)), tuple(args))
    if tok in nt_names:
        return Term(nt(tok))
    return Term(Symbol(tok))


def language_json(lang: set[Term]) -> list[str]:
    """Canonical, sorted string form for golden files."""
    return sorted(term_str(t) for t in lang)
