"""
Relation files and evaluation trace files. No network.
Run: pytest -q
"""

import pytest

from nfbisim.calculi import get_calculus
from nfbisim.errors import RelationFileError, TraceError
from nfbisim.grammar import parse_term
from nfbisim.settings import CORPUS
from nfbisim.relation import (
    RelPair,
    load_relation,
    make_pair,
    parse_relation,
    readable_pair,
    render_relation,
)
from nfbisim.terms import Abort, App, CalculusId, CtxApp, Var
from nfbisim.trace import describe_normal, parse_trace, render_text, render_trace, replay_trace

L, SR, CC = CalculusId.LAMBDA, CalculusId.SHIFT_RESET, CalculusId.CALLCC_ABORT


# ----------------------------- relation files ----------------------------

def test_load_corpus_relation():
    rel = load_relation(CORPUS / "c_current.rel")
    assert rel.calculus is CC
    (pr,) = rel.pairs
    assert pr.fresh == {"k", "f"} and pr.label == "pair 1"
    assert isinstance(pr.lhs, CtxApp) and pr.lhs.k == "k"


def test_terms_are_lifted_into_one_fresh_context():
    pr = make_pair(CC, parse_term("f", CC), parse_term(r"(\x. x) f", CC))
    assert pr.lhs == CtxApp("#k0", Var("f"))
    assert pr.rhs.k == "#k0" and pr.fresh == {"#k0"}


def test_program_sides_are_not_lifted_again():
    pr = make_pair(CC, parse_term("k[y]", CC), parse_term("A(k[y])", CC), fresh=["k", "y"])
    assert pr.lhs == CtxApp("k", Var("y"))
    assert pr.rhs == Abort(CtxApp("k", Var("y"))) and pr.fresh == {"k", "y"}
    pr = make_pair(CC, Var("y"), parse_term("k[y]", CC))
    assert (pr.lhs, pr.rhs) == (CtxApp("#k0", Var("y")), CtxApp("k", Var("y")))
    assert pr.fresh == {"#k0"}


@pytest.mark.parametrize("name", ["wadsworth.rel", "double_shift.rel", "c_tail.rel"])
def test_render_then_parse(name):
    rel = load_relation(CORPUS / name)
    assert parse_relation(render_relation(rel)) == rel


@pytest.mark.parametrize(
    "text,message",
    [
        ('(relation (calculus lambda) (pair "x" "y")', "malformed"),
        ('(relation (calculus kappa) (pair "x" "y"))', "unknown calculus"),
        ('(relation (pair "x" "y"))', "calculus"),
        ('(relation (calculus lambda) (pair "x"))', "two quoted terms"),
        ('(relation (calculus lambda) (pair (fresh z) "x" "y"))', "do not occur"),
        ('(relation (calculus lambda) (pair (fresh x x) "x" "x"))', "duplicate"),
        ('(relation (calculus lambda) (pair "S" "x"))', "pair 1"),
        ('(relation (calculus lambda) (pair "x" "(y"))', "pair 1"),
        ('(relation (calculus lambda)) (relation (calculus lambda))', "exactly one"),
    ],
)
def test_bad_relation_files(text, message):
    with pytest.raises(RelationFileError) as e:
        parse_relation(text)
    assert message in str(e.value)


def test_generated_names_need_permission():
    text = '(relation (calculus lambda) (pair (fresh #v0) "#v0" "#v0"))'
    with pytest.raises(RelationFileError):
        parse_relation(text)
    assert parse_relation(text, allow_generated=True).pairs[0].fresh == {"#v0"}


def test_readable_pair_avoids_taken_names():
    pr = RelPair(CtxApp("#k0", App(Var("#v0"), Var("x0"))), CtxApp("#k0", Var("x0")), frozenset({"#k0", "#v0"}))
    r = readable_pair(pr)
    assert r.lhs == CtxApp("k0", App(Var("x1"), Var("x0")))
    assert r.fresh == {"k0", "x1"}


# ----------------------------- traces ------------------------------------

def traced(text, calc, fuel=100):
    t = parse_term(text, calc)
    return t, get_calculus(calc).evaluate(t, fuel, record=True)


def test_trace_replays():
    t, r = traced("<S S>", SR)
    doc = replay_trace(render_trace(SR, t, r))
    assert doc.calculus is SR and len(doc.steps) == 5
    assert doc.final_kind == "value" and doc.final == r.normal.term


def test_exhausted_trace_replays():
    t, r = traced(r"(\x. x x) (\x. x x)", L, fuel=5)
    text = render_trace(L, t, r)
    assert "(exhausted" in text
    doc = replay_trace(text)
    assert doc.final_kind is None and len(doc.steps) == 5


def test_tampered_rule_is_caught():
    t, r = traced("<S S>", SR)
    text = render_trace(SR, t, r).replace("(step 1 capture", "(step 1 β")
    with pytest.raises(TraceError) as e:
        replay_trace(text)
    assert "step 1" in str(e.value)


def test_tampered_result_is_caught():
    t, r = traced(r"(\x. x) (\y. y)", L)
    text = render_trace(L, t, r).replace('(normal value "\\y. y")', '(normal open-stuck "\\y. y")')
    with pytest.raises(TraceError):
        replay_trace(text)


@pytest.mark.parametrize(
    "text",
    [
        "(trace)",
        '(trace (calculus lambda) (start "y"))',
        '(trace (calculus lambda) (start "y") (step 2 β "y") (normal value "y"))',
        '(trace (calculus lambda) (start "y") (step 1 eta "y") (normal value "y"))',
        '(trace (calculus lambda) (start "(y") (normal value "y"))',
        "(trace",
    ],
)
def test_malformed_traces(text):
    with pytest.raises(TraceError):
        parse_trace(text)


def test_text_rendering():
    t, r = traced(r"k[f (K (\x. x c d))]", CC)
    out = render_text(t, r)
    assert "callcc-capture" in out and "abort" in out
    assert out.rstrip().endswith(describe_normal(r.normal))
    assert describe_normal(r.normal) == "open-stuck on f: k[f c]"
