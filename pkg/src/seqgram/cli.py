"""Command-line front end.

Subcommands: check, reduce, extract-grammar, content, skolemize, desk,
confluence, generate, pipeline.  Exit codes: 0 success, 2 validation
failure, 3 property-check failure, 4 budget or cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from .extraction import content_json, herbrand_content
from .generate import GenerationFailed, GeneratorConfig, generate_proof
from .grammars import DEFAULT_LANGUAGE_CAP, LanguageCapExceeded
from .harness import confluence_check, default_strategies, pipeline
from .herbrand import SkolemMap, deskolemize_instances, skolemize_proof
from .proofs import (check_wellformed, is_regular, is_simple, parse_proof,
                     print_proof, proof_json)
from .reduction import DEFAULT_BUDGET, Strategy, reduce_proof, trace_json
from .syntax import SyntaxError_, formula_str, is_weak, sequent_str

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROPERTY = 3
EXIT_BUDGET = 4


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _emit_json(path: str | None, obj):
    _write(path, json.dumps(obj, sort_keys=True, indent=1))


def _load_proof(path: str):
    return parse_proof(_read(path))


def _parse_strategy(spec: str, seed: int, budget: int) -> Strategy:
    if spec.startswith("scripted:"):
        script = tuple(int(x) for x in spec.split(":", 1)[1].split(",") if x)
        return Strategy("scripted", seed=seed, script=script, budget=budget)
    return Strategy(spec, seed=seed, budget=budget)


def cmd_check(args) -> int:
    try:
        p = _load_proof(args.proof)
    except SyntaxError_ as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    d = check_wellformed(p)
    report = {
        "sequent": sequent_str(p.sequent),
        "wellformed": d is None,
        "regular": is_regular(p) if d is None else None,
        "weak_sequent": is_weak(p.sequent),
    }
    if d is not None:
        report["violation"] = {"locator": list(d.locator), "reason": d.reason}
    else:
        simple = is_simple(p)
        report["simple"] = simple is True
        if simple is not True:
            report["violation"] = {"locator": list(simple.locator),
                                   "reason": simple.reason}
    if args.format == "json":
        _emit_json(args.output, report)
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
    return EXIT_OK if report["wellformed"] and report.get("simple") else EXIT_VALIDATION


def cmd_reduce(args) -> int:
    p = _load_proof(args.proof)
    strategy = _parse_strategy(args.strategy, args.seed, args.budget)
    mode = {"full": "full", "noerase": "noerase"}[args.mode]
    nf, trace = reduce_proof(p, strategy, mode)
    if args.trace:
        _emit_json(args.trace, trace_json(trace))
    if args.output:
        _write(args.output, print_proof(nf))
    if args.format == "json":
        _emit_json(None, {"status": trace.status, "steps": len(trace.steps),
                          "cycled": trace.cycled})
    else:
        print(f"status: {trace.status} after {len(trace.steps)} steps")
    return EXIT_OK if trace.status == "normal-form" else EXIT_BUDGET


def cmd_extract_grammar(args) -> int:
    from .extraction import extract_grammar
    from .grammars import print_grammar
    p = _load_proof(args.proof)
    if is_simple(p) is not True:
        print("proof is not simple", file=sys.stderr)
        return EXIT_VALIDATION
    pg = extract_grammar(p)
    _write(args.output, print_grammar(pg.grammar) + "\n")
    return EXIT_OK


def cmd_content(args) -> int:
    p = _load_proof(args.proof)
    if is_simple(p) is not True:
        print("proof is not simple", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        content = herbrand_content(p, cap=args.cap)
    except LanguageCapExceeded:
        print("language size cap exceeded", file=sys.stderr)
        return EXIT_BUDGET
    _emit_json(args.output, content_json(content))
    return EXIT_OK


def cmd_skolemize(args) -> int:
    p = _load_proof(args.proof)
    skp, skmap, _ = skolemize_proof(p)
    _write(args.output, print_proof(skp))
    if args.map:
        _emit_json(args.map, skmap.to_json())
    return EXIT_OK


def cmd_desk(args) -> int:
    from .parsing import parse_formula
    skmap = SkolemMap.from_json(json.loads(_read(args.map)))
    if args.sequent:
        from .parsing import parse_sequent
        seq = parse_sequent(";".join(
            ln for ln in _read(args.sequent).splitlines() if ln.strip()))
        if seq != skmap.sequent:
            print("sequent file does not match the Skolem map", file=sys.stderr)
            return EXIT_VALIDATION
    formulas = {parse_formula(s) for s in json.loads(_read(args.content))}
    out = deskolemize_instances(formulas, skmap)
    _emit_json(args.output, sorted(formula_str(f) for f in out))
    return EXIT_OK


def cmd_confluence(args) -> int:
    p = _load_proof(args.proof)
    if is_simple(p) is not True:
        print("proof is not simple", file=sys.stderr)
        return EXIT_VALIDATION
    strategies = default_strategies(k=args.runs, budget=args.budget)
    report = confluence_check(p, strategies, mode=args.mode, budget=args.budget)
    if args.format == "json":
        _emit_json(args.output, report.to_json())
    else:
        print(f"verdict: {report.verdict}")
        for r in report.runs:
            print(f"  {r.strategy}: {r.status} ({r.steps} steps)")
    if report.verdict == "confluent":
        return EXIT_OK
    if report.verdict == "inconclusive":
        return EXIT_BUDGET
    return EXIT_PROPERTY


def cmd_generate(args) -> int:
    cfg = GeneratorConfig(seed=args.seed, max_cuts=args.max_cuts,
                          max_quantified_cuts=args.max_quantified_cuts,
                          max_term_depth=args.max_term_depth,
                          signature_size=args.signature_size,
                          shape=args.shape)
    try:
        p = generate_proof(cfg)
    except GenerationFailed as e:
        print(str(e), file=sys.stderr)
        return EXIT_VALIDATION
    _write(args.output, print_proof(p))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    p = _load_proof(args.proof)
    bundle, code = pipeline(p, cap=args.cap)
    _emit_json(args.output, bundle)
    return code


def cmd_export_json(args) -> int:
    p = _load_proof(args.proof)
    _emit_json(args.output, proof_json(p))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seqgram")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("--cap", type=int, default=DEFAULT_LANGUAGE_CAP)
    ap.add_argument("--format", choices=("json", "text"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(parser):
        # the global flags are also accepted after the subcommand
        parser.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        parser.add_argument("--budget", type=int, default=argparse.SUPPRESS)
        parser.add_argument("--cap", type=int, default=argparse.SUPPRESS)
        parser.add_argument("--format", choices=("json", "text"),
                            default=argparse.SUPPRESS)

    c = sub.add_parser("check", help="validate a proof file")
    c.add_argument("proof")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("reduce", help="run cut reduction")
    c.add_argument("proof")
    c.add_argument("--mode", choices=("full", "noerase"), default="full")
    c.add_argument("--strategy", default="leftmost-innermost")
    c.add_argument("--trace", default=None)
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_reduce)

    c = sub.add_parser("extract-grammar", help="grammar of a simple proof")
    c.add_argument("proof")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_extract_grammar)

    c = sub.add_parser("content", help="Herbrand content of a simple proof")
    c.add_argument("proof")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_content)

    c = sub.add_parser("skolemize", help="skolemize a proof")
    c.add_argument("proof")
    c.add_argument("-o", "--output", default=None)
    c.add_argument("--map", default=None)
    common(c)
    c.set_defaults(fn=cmd_skolemize)

    c = sub.add_parser("desk", help="deskolemize a content file")
    c.add_argument("content")
    c.add_argument("--map", required=True)
    c.add_argument("--sequent", default=None)
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_desk)

    c = sub.add_parser("confluence", help="compare normal forms across strategies")
    c.add_argument("proof")
    c.add_argument("--runs", type=int, default=5)
    c.add_argument("--mode", choices=("full", "noerase"), default="noerase")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_confluence)

    c = sub.add_parser("generate", help="generate a random simple proof")
    c.add_argument("--max-cuts", type=int, default=2)
    c.add_argument("--max-quantified-cuts", type=int, default=2)
    c.add_argument("--max-term-depth", type=int, default=3)
    c.add_argument("--signature-size", type=int, default=2)
    c.add_argument("--shape", choices=("weak", "general"), default="weak")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_generate)

    c = sub.add_parser("pipeline", help="full artifact bundle with cross-checks")
    c.add_argument("proof")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_pipeline)

    c = sub.add_parser("export-json", help="proof as JSON with stable node ids")
    c.add_argument("proof")
    c.add_argument("-o", "--output", default=None)
    common(c)
    c.set_defaults(fn=cmd_export_json)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SyntaxError_ as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
