"""Confluence harness: run several reduction strategies on a proof and
compare the renamed Herbrand sets of all reached normal forms against the
proof's Herbrand content."""

from __future__ import annotations

from dataclasses import dataclass

from .extraction import content_json, herbrand_content, proof_language
from .grammars import DEFAULT_LANGUAGE_CAP
from .herbrand import canonical_rename, instances_of, is_herbrand_disjunction, parse_instances
from .proofs import Proof, herbrand_set
from .reduction import DEFAULT_BUDGET, ReductionTrace, Strategy, reduce_proof
from .syntax import Formula, Sequent, formula_str, leq_formula_set


def default_strategies(k: int = 5, budget: int = DEFAULT_BUDGET,
                       size_cap: int | None = None) -> list[Strategy]:
    pool = [
        Strategy("leftmost-innermost", budget=budget, size_cap=size_cap),
        Strategy("leftmost-outermost", budget=budget, size_cap=size_cap),
        Strategy("rightmost-uppermost", budget=budget, size_cap=size_cap),
        Strategy("random", seed=101, budget=budget, size_cap=size_cap),
        Strategy("random", seed=202, budget=budget, size_cap=size_cap),
    ]
    extra = 303
    while len(pool) < k:
        pool.append(Strategy("random", seed=extra, budget=budget, size_cap=size_cap))
        extra += 101
    return pool[:k]


def normal_form_content(nf: Proof, trace: ReductionTrace,
                        original: Sequent) -> set[Formula]:
    """Hseq of a normal form under canonical renaming, with instance indices
    referred back to the original end-sequent through the run's occurrence
    permutation."""
    perm = trace.end_permutation
    inv = {new: old for old, new in enumerate(perm)}
    indices = tuple(inv[o] + 1 for o in range(len(nf.sequent)))
    return canonical_rename(instances_of(nf, indices, original))


@dataclass(frozen=True)
class RunResult:
    strategy: str
    status: str
    steps: int
    cycled: bool
    content: tuple[str, ...] | None   # sorted canonical strings, None if unfinished


@dataclass(frozen=True)
class ConfluenceReport:
    verdict: str                      # 'confluent' | 'mismatch' | 'inconclusive'
    expected: tuple[str, ...]
    runs: tuple[RunResult, ...]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "expected_content": list(self.expected),
            "runs": [{
                "strategy": r.strategy,
                "status": r.status,
                "steps": r.steps,
                "cycled": r.cycled,
                "content": None if r.content is None else list(r.content),
            } for r in self.runs],
        }


def _strategy_label(s: Strategy) -> str:
    if s.policy == "random":
        return f"random(seed={s.seed})"
    if s.policy == "scripted":
        return f"scripted({','.join(map(str, s.script))};seed={s.seed})"
    return s.policy


def confluence_check(pi: Proof, strategies: list[Strategy] | None = None,
                     mode: str = "noerase",
                     budget: int = DEFAULT_BUDGET) -> ConfluenceReport:
    if strategies is None:
        strategies = default_strategies(budget=budget)
    expected = tuple(content_json(herbrand_content(pi)))
    runs = []
    any_nf = False
    all_match = True
    for s in strategies:
        nf, trace = reduce_proof(pi, s, mode)
        if trace.status == "normal-form":
            any_nf = True
            got = tuple(sorted(formula_str(f)
                               for f in normal_form_content(nf, trace, pi.sequent)))
            if got != expected:
                all_match = False
            runs.append(RunResult(_strategy_label(s), trace.status,
                                  len(trace.steps), trace.cycled, got))
        else:
            runs.append(RunResult(_strategy_label(s), trace.status,
                                  len(trace.steps), trace.cycled, None))
    verdict = ("inconclusive" if not any_nf
               else "confluent" if all_match else "mismatch")
    return ConfluenceReport(verdict, expected, tuple(runs))


def content_disjunction_check(content: set[Formula], seq: Sequent) -> bool | str:
    """Criterion check: a Herbrand content must be a Herbrand disjunction of
    the end-sequent (acyclic dependencies and a tautology)."""
    return is_herbrand_disjunction(parse_instances(content, seq))


def pipeline(pi: Proof, cap: int = DEFAULT_LANGUAGE_CAP) -> tuple[dict, int]:
    """Full bundle for one proof; returns (bundle, exit_code)."""
    from .extraction import extract_grammar
    from .grammars import (LanguageCapExceeded, compute_regular_language,
                           derigidify, is_acyclic, language_json, print_grammar)
    from .herbrand import skolemize_proof
    from .proofs import is_simple, print_proof
    from .syntax import apply_subst, is_weak

    simple = is_simple(pi)
    if simple is not True:
        return {"error": f"proof is not simple: {simple.reason}"}, 2

    bundle: dict = {"proof": print_proof(pi)}
    code = 0
    pg = extract_grammar(pi)
    bundle["grammar"] = print_grammar(pg.grammar)
    bundle["grammar_acyclic"] = is_acyclic(pg.grammar)
    lang = proof_language(pi, cap)
    bundle["rigid_language"] = sorted(formula_str(f) for f in lang)
    try:
        reg = compute_regular_language(derigidify(pg.grammar), cap)
        bundle["regular_language"] = language_json(reg)
    except LanguageCapExceeded as e:
        bundle["regular_language"] = f"cap exceeded ({e.cap})"
        code = 4
    content = herbrand_content(pi, cap)
    bundle["content"] = content_json(content)

    skp, skmap, sigma = skolemize_proof(pi)
    bundle["skolemized_proof"] = print_proof(skp)
    bundle["skolem_map"] = skmap.to_json()
    skpg = extract_grammar(skp)
    bundle["skolemized_grammar"] = print_grammar(skpg.grammar)
    sk_lang = proof_language(skp, cap)
    bundle["skolemized_language"] = sorted(formula_str(f) for f in sk_lang)

    checks = {
        "sk_language_commutes": sk_lang == {apply_subst(f, sigma) for f in lang},
        "content_is_herbrand_disjunction":
            content_disjunction_check(content, pi.sequent) is True,
        "weak_content_equals_language":
            (not is_weak(pi.sequent)) or content == lang,
    }
    # one non-erasing step, if any: content must be invariant (main theorem)
    from .reduction import find_redexes, apply_step
    rs = find_redexes(pi, "noerase")
    if rs:
        stepped = apply_step(pi, rs[0])
        checks["content_invariant_one_step"] = herbrand_content(stepped, cap) == content
    bundle["checks"] = checks
    if not all(checks.values()):
        code = 3
    return bundle, code
