import json
import subprocess
import sys
from pathlib import Path

import pytest

from seqgram.corpus import fixture, fixtures, golden_bundle, write_corpus
from seqgram.generate import GeneratorConfig, generate_proof
from seqgram.harness import confluence_check, default_strategies, pipeline
from seqgram.proofs import (assert_wellformed, is_simple, parse_proof,
                            print_proof, proofs_equal_canonical)
from seqgram.reduction import Strategy
from seqgram.syntax import is_weak

REPO = Path(__file__).resolve().parent.parent
CORPUS = REPO / "corpus"


def run_cli(*argv, cwd=REPO):
    return subprocess.run([sys.executable, "-m", "seqgram.cli", *argv],
                          capture_output=True, text=True, cwd=cwd)


# --- corpus integrity ------------------------------------------------------------

def test_corpus_files_match_builders():
    for e in fixtures():
        text = (CORPUS / f"{e.name}.p").read_text()
        assert parse_proof(text) == e.proof(), e.name


def test_goldens_regenerate_bit_identically():
    for e in fixtures():
        stored = json.loads((CORPUS / f"{e.name}.golden.json").read_text())
        assert stored == golden_bundle(e), e.name


def test_fixtures_all_simple():
    for e in fixtures():
        p = e.proof()  # raises if ill-formed or not simple
        if "weak-sequent" in e.tags:
            assert is_weak(p.sequent)


# --- generator ----------------------------------------------------------------------

def test_generator_deterministic_and_valid():
    for seed in range(1, 8):
        p1 = generate_proof(GeneratorConfig(seed=seed))
        p2 = generate_proof(GeneratorConfig(seed=seed))
        assert p1 == p2
        assert_wellformed(p1)
        assert is_simple(p1) is True


def test_generator_shapes():
    for seed in range(1, 6):
        w = generate_proof(GeneratorConfig(seed=seed, shape="weak"))
        assert is_weak(w.sequent)
        g = generate_proof(GeneratorConfig(seed=seed, shape="general"))
        assert_wellformed(g)


def test_generator_no_cuts_config():
    p = generate_proof(GeneratorConfig(seed=2, max_cuts=0))
    from seqgram.proofs import cut_nodes
    assert cut_nodes(p) == []


# --- harness -----------------------------------------------------------------------

def test_confluence_report_drinker():
    p = fixture("drinker_with_cut").proof()
    report = confluence_check(p, default_strategies(k=5, budget=1000))
    assert report.verdict == "confluent"
    assert all(r.status == "normal-form" for r in report.runs)


def test_confluence_cutfree_trivial():
    p = fixture("chain2").proof()
    report = confluence_check(p)
    assert report.verdict == "confluent"
    assert all(r.steps == 0 for r in report.runs)


def test_confluence_inconclusive_on_tiny_budget():
    p = fixture("double_contraction").proof()
    strategies = [Strategy("leftmost-innermost", budget=2)]
    report = confluence_check(p, strategies)
    assert report.verdict == "inconclusive"


def test_pipeline_bundle_green():
    for name in ("drinker_with_cut", "stacked_cuts", "two_conjunct"):
        bundle, code = pipeline(fixture(name).proof())
        assert code == 0, name
        assert all(bundle["checks"].values()), name


def test_pipeline_rejects_non_simple():
    from seqgram.parsing import parse_formula
    from seqgram.proofs import ax, cut, weak
    from seqgram.corpus import lit
    from seqgram.syntax import T, dual
    inner = parse_formula("(ex z (all w R(z,w)))")
    l = weak(ax(lit("P", T("c"))), inner)
    r = weak(ax(lit("Q", T("c"))), dual(inner))
    bundle, code = pipeline(cut(l, r, 2, 2))
    assert code == 2 and "error" in bundle


# --- CLI ----------------------------------------------------------------------------

def test_cli_check_ok():
    out = run_cli("check", "corpus/drinker_with_cut.p")
    assert out.returncode == 0
    assert "wellformed: True" in out.stdout


def test_cli_check_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.p"
    bad.write_text("n0 = (cont n0 0 1)\n")
    out = run_cli("check", str(bad))
    assert out.returncode == 2


def test_cli_reduce_and_content(tmp_path):
    nf = tmp_path / "nf.p"
    tr = tmp_path / "tr.json"
    out = run_cli("reduce", "corpus/drinker_with_cut.p", "--mode", "noerase",
                  "--strategy", "leftmost-innermost",
                  "-o", str(nf), "--trace", str(tr))
    assert out.returncode == 0
    trace = json.loads(tr.read_text())
    assert [t["step"] for t in trace] == list(range(len(trace)))
    assert all({"kind", "locator", "size", "hash"} <= set(t) for t in trace)
    out = run_cli("content", "corpus/drinker_with_cut.p")
    assert out.returncode == 0
    assert json.loads(out.stdout) == ["(or bot P(a_1_2__d))",
                                      "(or ~P(a_1_2__d) bot)"]


def test_cli_skolemize_desk_roundtrip(tmp_path):
    skp = tmp_path / "sk.p"
    mp = tmp_path / "map.json"
    ct = tmp_path / "content.json"
    assert run_cli("skolemize", "corpus/drinker_cutfree.p", "-o", str(skp),
                   "--map", str(mp)).returncode == 0
    assert run_cli("content", str(skp), "-o", str(ct)).returncode == 0
    out = run_cli("desk", str(ct), "--map", str(mp))
    assert out.returncode == 0
    desk = json.loads(out.stdout)
    direct = json.loads(run_cli("content", "corpus/drinker_cutfree.p").stdout)
    assert desk == direct


def test_cli_confluence_exit_codes():
    out = run_cli("confluence", "corpus/drinker_with_cut.p", "--runs", "3")
    assert out.returncode == 0
    assert "verdict: confluent" in out.stdout


def test_cli_generate_deterministic(tmp_path):
    a, b = tmp_path / "a.p", tmp_path / "b.p"
    assert run_cli("generate", "--seed", "9", "-o", str(a)).returncode == 0
    assert run_cli("generate", "--seed", "9", "-o", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    assert run_cli("check", str(a)).returncode == 0


def test_cli_deterministic_bytes():
    r1 = run_cli("--format", "json", "confluence", "corpus/stacked_cuts.p",
                 "--runs", "4")
    r2 = run_cli("--format", "json", "confluence", "corpus/stacked_cuts.p",
                 "--runs", "4")
    assert r1.stdout == r2.stdout and r1.returncode == r2.returncode == 0


def test_cli_pipeline(tmp_path):
    out = tmp_path / "bundle.json"
    r = run_cli("pipeline", "corpus/chain_with_cut.p", "-o", str(out))
    assert r.returncode == 0
    bundle = json.loads(out.read_text())
    assert all(bundle["checks"].values())


def test_cli_export_json():
    r = run_cli("export-json", "corpus/chain2.p")
    assert r.returncode == 0
    d = json.loads(r.stdout)
    assert d["rule"] == "cont"


def test_write_corpus_roundtrip(tmp_path):
    write_corpus(str(tmp_path))
    for e in fixtures():
        assert proofs_equal_canonical(
            parse_proof((tmp_path / f"{e.name}.p").read_text()), e.proof())
