"""Propositional validity for quantifier-free formulas.

Ground atoms are compared syntactically; top and bot are constants.  Small
inputs go through an exhaustive truth table, larger ones through a DPLL
refutation of the negated CNF.
"""

from __future__ import annotations

from itertools import product

from .syntax import (
    And, Bot, Formula, Lit, NotQuantifierFree, Or, Term, Top, quantifier_free,
)

TRUTH_TABLE_LIMIT = 20

Atom = tuple[str, tuple[Term, ...]]


def atoms_of(f: Formula) -> set[Atom]:
    match f:
        case Lit(name, args, _):
            return {(name, args)}
        case And(a, b) | Or(a, b):
            return atoms_of(a) | atoms_of(b)
        case _:
            return set()


def eval_formula(f: Formula, assignment: dict[Atom, bool]) -> bool:
    match f:
        case Lit(name, args, positive):
            value = assignment[(name, args)]
            return value if positive else not value
        case Top():
            return True
        case Bot():
            return False
        case And(a, b):
            return eval_formula(a, assignment) and eval_formula(b, assignment)
        case Or(a, b):
            return eval_formula(a, assignment) or eval_formula(b, assignment)
    raise NotQuantifierFree(f"not quantifier-free: {f}")


def is_tautology(fs) -> bool:
    """True iff the disjunction of the given formulas is propositionally valid."""
    fs = list(fs)
    for f in fs:
        if not quantifier_free(f):
            raise NotQuantifierFree(f"not quantifier-free: {f}")
    atoms = sorted(set().union(*[atoms_of(f) for f in fs]) if fs else set(),
                   key=lambda a: (a[0], tuple(map(str, a[1]))))
    if len(atoms) <= TRUTH_TABLE_LIMIT:
        return _taut_table(fs, atoms)
    return _taut_dpll(fs, atoms)


def _taut_table(fs, atoms) -> bool:
    for values in product((False, True), repeat=len(atoms)):
        assignment = dict(zip(atoms, values))
        if not any(eval_formula(f, assignment) for f in fs):
            return False
    return True


# --- DPLL refutation of the negation -----------------------------------

def _to_nnf_neg(f: Formula) -> Formula:
    """Negate a quantifier-free formula, staying in NNF."""
    match f:
        case Lit(name, args, positive):
            return Lit(name, args, not positive)
        case Top():
            return Bot()
        case Bot():
            return Top()
        case And(a, b):
            return Or(_to_nnf_neg(a), _to_nnf_neg(b))
        case Or(a, b):
            return And(_to_nnf_neg(a), _to_nnf_neg(b))
    raise NotQuantifierFree(f"not quantifier-free: {f}")


def _cnf(f: Formula, index: dict[Atom, int]) -> list[frozenset[int]] | None:
    """Clause list for f; literals are +/- atom indices.  None means 'false'."""
    match f:
        case Top():
            return []
        case Bot():
            return None
        case Lit(name, args, positive):
            i = index[(name, args)]
            return [frozenset({i if positive else -i})]
        case And(a, b):
            ca, cb = _cnf(a, index), _cnf(b, index)
            if ca is None or cb is None:
                return None
            return ca + cb
        case Or(a, b):
            ca, cb = _cnf(a, index), _cnf(b, index)
            if ca is None:
                return cb
            if cb is None:
                return ca
            out = []
            for x in ca:
                for y in cb:
                    out.append(x | y)
            return out
    raise NotQuantifierFree(f"not quantifier-free: {f}")


def _taut_dpll(fs, atoms) -> bool:
    index = {a: i + 1 for i, a in enumerate(atoms)}
    clauses: list[frozenset[int]] = []
    for f in fs:
        c = _cnf(_to_nnf_neg(f), index)
        if c is None:
            return True  # negation of f is false, so f alone is valid
        clauses.extend(c)
    return not _dpll(clauses)


def _dpll(clauses: list[frozenset[int]]) -> bool:
    """Satisfiability of a clause set."""
    clauses = [c for c in clauses if not _is_taut_clause(c)]
    while True:
        if not clauses:
            return True
        if any(not c for c in clauses):
            return False
        unit = next((next(iter(c)) for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        clauses = _assign(clauses, unit)
    lit = next(iter(clauses[0]))
    return _dpll(_assign(clauses, lit)) or _dpll(_assign(clauses, -lit))


def _is_taut_clause(c: frozenset[int]) -> bool:
    return any(-x in c for x in c)


def _assign(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            out.append(c - {-lit})
        else:
            out.append(c)
    return out
