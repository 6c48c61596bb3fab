"""Plain-text rendering of verdicts and closure proofs."""

from __future__ import annotations

from typing import List

from .closure import MEMBER, Proof
from .engine import Evidence, Failed, Inconclusive, NotBisimilar, PairReport, Verdict, Verified
from .grammar import print_term
from .relation import Relation, readable_pair, render_relation
from .trace import describe_normal

UNSAFE_NOTE = "strong set enlarged with --unsafe; this is not a proof"


def show_proof(p: Proof) -> str:
    if p.rule == MEMBER:
        return p.pair
    if not p.premises:
        return p.rule
    return f"{p.rule}({', '.join(show_proof(q) for q in p.premises)})"


def _pair(lhs, rhs) -> str:
    return f"{print_term(lhs)}  ~  {print_term(rhs)}"


def _report(r: PairReport, indent: str, out: List[str]) -> None:
    out.append(f"{indent}{r.label}: {r.clause} clause after {r.lhs_steps}/{r.rhs_steps} steps")
    for d in r.discharges:
        ob = d.obligation
        head = f"{indent}  {ob.kind.value} {ob.label}"
        if d.proof is not None:
            out.append(f"{head}: {show_proof(d.proof)}")
        else:
            out.append(f"{head}: expanded")
            _report(d.expansion, indent + "    ", out)


def _path(goals, out: List[str]) -> None:
    for i, (t, s) in enumerate(goals):
        out.append(f"  {i}: {_pair(t, s)}")


def render_evidence(e: Evidence) -> List[str]:
    out = [f"  from {e.root}:"]
    _path(e.goals, out)
    if e.mismatch is not None:
        out.append(f"  mismatch: {e.mismatch.reason}")
        out.append(f"    lhs {describe_normal(e.mismatch.lhs)}")
        out.append(f"    rhs {describe_normal(e.mismatch.rhs)}")
    elif e.diverging is not None:
        out.append(f"  {e.diverging} diverges, the other side reaches a normal form")
    return out


def render_verdict(verdict: Verdict, verbose: bool = False) -> str:
    match verdict:
        case Verified(reports=reports, unsafe=unsafe):
            added = f", {verdict.expanded} added by expansion" if verdict.expanded else ""
            out = [f"{verdict.label} ({len(reports)} pairs{added})"]
            if unsafe:
                out.append(f"  warning: {UNSAFE_NOTE}")
            if verbose:
                for r in reports:
                    _report(r, "  ", out)
        case Failed():
            ob = verdict.obligation
            out = [f"{verdict.label} {verdict.pair}: {verdict.reason}", f"  obligation: {_pair(ob.lhs, ob.rhs)}"]
            if verbose:
                _path(verdict.path, out)
            if verdict.candidate is not None:
                c = readable_pair(verdict.candidate)
                fresh = " ".join(sorted(c.fresh))
                out.append(f"  candidate pair (fresh {fresh}): {_pair(c.lhs, c.rhs)}")
        case Inconclusive():
            where = f" {verdict.pair}" if verdict.pair else ""
            out = [f"{verdict.label}{where}: {verdict.reason}"]
            if verbose:
                _path(verdict.path, out)
        case NotBisimilar(evidence=e):
            out = [verdict.label] + render_evidence(e)
        case _:
            raise TypeError(f"Unexpected verdict: {verdict!r}")
    return "\n".join(out) + "\n"


def render_witness(rel: Relation, verdict: Verdict) -> str:
    text = render_relation(rel, readable=True)
    if isinstance(verdict, Verified) and verdict.unsafe:
        text = f"; UNSAFE: {UNSAFE_NOTE}\n" + text
    return text
