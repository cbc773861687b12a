"""Sequent-calculus cut elimination, rigid tree grammars, and executable
Herbrand-confluence checks."""

from .syntax import (  # noqa: F401
    And, BOT, Bot, Ex, All, Formula, Kind, Lit, Or, Sequent, Subst, Symbol,
    Term, TOP, Top, apply_subst, bound, canon, dual, fn, is_weak, leq_formula,
    leq_formula_set, mk_all, mk_and, mk_ex, mk_or, quantifier_free,
    subterm_at, var,
)
from .tautology import is_tautology  # noqa: F401
