"""
Evaluation traces: rendering for people, an s-expression form that can be
read back, and replay of that form against the reduction semantics.

    (trace (calculus shiftreset)
      (start "<S S>")
      (step 1 capture "<S (\\#v0. <#v0>)>")
      ...
      (normal value "\\x. <x>"))

A run that ran out of fuel ends in `(exhausted "<last term>")` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .calculi import get_calculus
from .errors import NfbisimError, TraceError
from .grammar import parse_term, print_term
from .semantics import RULES, ContextStuck, EvalResult, Evaluated, NormalForm, OpenStuck, Step
from .sexpr import Atom, SList, quote, read_sexprs
from .terms import CalculusId, Term


def describe_normal(nf: NormalForm) -> str:
    match nf:
        case OpenStuck(head=x):
            return f"open-stuck on {x}: {print_term(nf.term, readable=True)}"
        case ContextStuck(k=k, value=v):
            return f"context-stuck at {k}: {print_term(v, readable=True)}"
        case _:
            return f"{nf.kind}: {print_term(nf.term, readable=True)}"


def render_text(start: Term, result: EvalResult) -> str:
    width = max((len(s.rule) for s in result.trace), default=0)
    lines = [f"     {print_term(start, readable=True)}"]
    for i, s in enumerate(result.trace, start=1):
        lines.append(f"{i:>3}  {s.rule:<{width}}  {print_term(s.term, readable=True)}")
    if isinstance(result, Evaluated):
        lines.append(describe_normal(result.normal))
    else:
        lines.append(f"fuel exhausted after {result.steps} steps")
    return "\n".join(lines) + "\n"


def render_trace(calc: CalculusId, start: Term, result: EvalResult) -> str:
    lines = [f"(trace (calculus {CalculusId(calc).value})", f"  (start {quote(print_term(start))})"]
    for i, s in enumerate(result.trace, start=1):
        lines.append(f"  (step {i} {s.rule} {quote(print_term(s.term))})")
    if isinstance(result, Evaluated):
        lines.append(f"  (normal {result.normal.kind} {quote(print_term(result.normal.term))}))")
    else:
        lines.append(f"  (exhausted {quote(print_term(result.last))}))")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TraceDoc:
    calculus: CalculusId
    start: Term
    steps: Tuple[Step, ...]
    final_kind: Optional[str]
    final: Term


def _atoms(form: SList, n: int) -> List[Atom]:
    items = form.items[1:]
    if len(items) != n or not all(isinstance(a, Atom) for a in items):
        raise TraceError(f"malformed ({form.head()} ...) at line {form.line}")
    return list(items)


def parse_trace(text: str) -> TraceDoc:
    try:
        forms = read_sexprs(text)
    except ValueError as e:
        raise TraceError(str(e)) from e
    if len(forms) != 1 or not isinstance(forms[0], SList) or forms[0].head() != "trace":
        raise TraceError("expected exactly one (trace ...) form")
    body = list(forms[0].items[1:])
    if len(body) < 3 or not all(isinstance(f, SList) for f in body):
        raise TraceError("a trace needs calculus, start and final clauses")
    try:
        if body[0].head() != "calculus":
            raise TraceError("missing (calculus ...) clause")
        calc = CalculusId(_atoms(body[0], 1)[0].text)
        if body[1].head() != "start":
            raise TraceError("missing (start ...) clause")
        start = parse_term(_atoms(body[1], 1)[0].text, calc, allow_generated=True)
        steps: List[Step] = []
        for i, form in enumerate(body[2:-1], start=1):
            if form.head() != "step":
                raise TraceError(f"expected (step ...) at line {form.line}")
            index, rule, term = _atoms(form, 3)
            if index.text != str(i):
                raise TraceError(f"step {index.text} out of order at line {form.line}")
            if rule.text not in RULES:
                raise TraceError(f"unknown rule {rule.text!r} at line {form.line}")
            steps.append(Step(rule.text, parse_term(term.text, calc, allow_generated=True)))
        last = body[-1]
        if last.head() == "normal":
            kind, term = _atoms(last, 2)
            return TraceDoc(calc, start, tuple(steps), kind.text, parse_term(term.text, calc, allow_generated=True))
        if last.head() == "exhausted":
            (term,) = _atoms(last, 1)
            return TraceDoc(calc, start, tuple(steps), None, parse_term(term.text, calc, allow_generated=True))
        raise TraceError(f"expected (normal ...) or (exhausted ...) at line {last.line}")
    except TraceError:
        raise
    except (NfbisimError, ValueError) as e:
        raise TraceError(f"bad trace: {e}") from e


def replay_trace(text: str) -> TraceDoc:
    """Re-run every step of a trace and check rules, terms and the final
    classification; returns the parsed trace."""
    doc = parse_trace(text)
    calc = get_calculus(doc.calculus)
    t = doc.start
    for i, expected in enumerate(doc.steps, start=1):
        got = calc.advance(t)
        if not isinstance(got, Step):
            raise TraceError(f"step {i}: term is already a {got.kind} normal form")
        if got.rule != expected.rule:
            raise TraceError(f"step {i}: rule is {got.rule}, trace says {expected.rule}")
        if got.term != expected.term:
            raise TraceError(f"step {i}: got {print_term(got.term)}")
        t = got.term
    end = calc.advance(t)
    if doc.final_kind is None:
        if not isinstance(end, Step) or doc.final != t:
            raise TraceError("trace claims exhaustion but its last term does not reduce")
        return doc
    if isinstance(end, Step):
        raise TraceError(f"final term still reduces by {end.rule}")
    if end.kind != doc.final_kind or end.term != doc.final:
        raise TraceError(f"final normal form is {describe_normal(end)}")
    return doc
