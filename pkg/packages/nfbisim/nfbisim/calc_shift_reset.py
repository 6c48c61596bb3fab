"""
Lambda calculus with shift (S) and reset (<t>).

    E ::= [] | E t | v E                 pure contexts
    F ::= [] | F t | v F | <F>           evaluation contexts

    F[(\\x. t) v]     ->  F[t{v/x}]
    F[<E[S v]>]       ->  F[<v (\\x. <E[x]>)>]     x not in fv(E)
    F[<v>]            ->  F[v]

There is no top-level reset, so a shift with no enclosing reset leaves a
control-stuck term E[S v].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Union

from .contexts import Ctx, descend, innermost_reset, plug_frames
from .semantics import (
    BETA,
    CAPTURE,
    RESET_VALUE,
    Clause,
    ControlStuck,
    Decomposition,
    EvalResult,
    Mismatch,
    Normal,
    NormalForm,
    Obligation,
    ObligationResult,
    OpenStuck,
    Redex,
    Step,
    Value,
    kind_mismatch,
    run,
    value_test,
)
from .calc_lambda import contract_beta
from .terms import App, Bound, Lam, Reset, Shift, Term, Var, free_names, free_vars, fresh_var, is_value


def decompose_sr(t: Term) -> Decomposition:
    frames, focus = descend(t, through_reset=True)
    match focus:
        case App(Lam(), _):
            return Redex(Ctx(frames), focus, BETA)
        case App(Var(x), arg):
            return Normal(OpenStuck(Ctx(frames), x, arg))
        case App(Shift(), arg):
            i = innermost_reset(frames)
            if i < 0:
                return Normal(ControlStuck(Ctx(frames), arg))
            return Redex(Ctx(frames[:i]), plug_frames(frames[i:], focus), CAPTURE)
        case Reset(body):
            return Redex(Ctx(frames), focus, RESET_VALUE)
        case _ if is_value(focus) and not frames:
            return Normal(Value(focus))
        case _:
            raise TypeError(f"Unexpected term in decompose_sr: {focus!r}")


def contract_capture(redex: Reset) -> Term:
    """<E[S v]>  ->  <v (\\x. <E[x]>)>"""
    inner, focus = descend(redex.body)
    if not isinstance(focus, App) or not isinstance(focus.fn, Shift):
        raise ValueError(f"not a capture redex: {redex!r}")
    v = focus.arg
    hint = fresh_var(Ctx(inner).free_vars() | free_vars(v))
    return Reset(App(v, Lam(hint, Reset(plug_frames(inner, Bound(0))))))


def advance_sr(t: Term) -> Union[Step, NormalForm]:
    d = decompose_sr(t)
    if isinstance(d, Normal):
        return d.nf
    if d.rule == BETA:
        contractum = contract_beta(d.redex)
    elif d.rule == CAPTURE:
        contractum = contract_capture(d.redex)
    else:
        contractum = d.redex.body
    return Step(d.rule, d.ctx.plug(contractum))


def step_sr(t: Term) -> Optional[Term]:
    s = advance_sr(t)
    return s.term if isinstance(s, Step) else None


def eval_sr(t: Term, fuel: int, record: bool = False) -> EvalResult:
    return run(advance_sr, t, fuel, record)


@dataclass(frozen=True)
class Pure:
    ctx: Ctx


@dataclass(frozen=True)
class Split:
    """F = outer[<inner>] with inner pure"""
    outer: Ctx
    inner: Ctx


def split_at_reset(f: Ctx) -> Union[Pure, Split]:
    i = innermost_reset(f.frames)
    if i < 0:
        return Pure(f)
    return Split(Ctx(f.frames[:i]), Ctx(f.frames[i + 1:]))


def context_obligations(f: Ctx, g: Ctx, x: str, label: str = "context") -> Optional[List[Obligation]]:
    """The context test: pure contexts are compared by plugging a fresh
    variable; F[<E>] and F'[<E'>] are compared at their innermost reset.
    None when one context is pure and the other is not."""
    fresh = frozenset({x})
    match split_at_reset(f), split_at_reset(g):
        case Pure(), Pure():
            return [Obligation(Clause.ACTIVE, f.plug(Var(x)), g.plug(Var(x)), fresh, label)]
        case Split(o1, i1), Split(o2, i2):
            return [
                Obligation(Clause.ACTIVE, Reset(i1.plug(Var(x))), Reset(i2.plug(Var(x))), fresh, f"{label}-delimited"),
                Obligation(Clause.ACTIVE, o1.plug(Var(x)), o2.plug(Var(x)), fresh, f"{label}-outer"),
            ]
        case _:
            return None


def obligations_sr(a: NormalForm, b: NormalForm, avoid: Iterable[str] = ()) -> ObligationResult:
    avoid = set(avoid) | free_names(a.term, b.term)
    x = fresh_var(avoid)
    y = fresh_var(avoid | {x})
    match a, b:
        case Value(v), Value(w):
            return [value_test(v, w, x)]
        case OpenStuck(), OpenStuck() if a.head == b.head:
            obs = context_obligations(a.ctx, b.ctx, x)
            if obs is None:
                return Mismatch("one context is pure, the other is delimited by a reset", a, b)
            return obs + [value_test(a.arg, b.arg, y, "argument", Clause.ACTIVE)]
        case OpenStuck(), OpenStuck():
            return Mismatch(f"head variables differ: {a.head} vs {b.head}", a, b)
        case ControlStuck(), ControlStuck():
            obs = context_obligations(a.ctx, b.ctx, x)
            if obs is None:
                return Mismatch("control-stuck contexts differ in shape", a, b)
            return obs + [
                Obligation(
                    Clause.ACTIVE,
                    Reset(App(a.arg, Var(y))),
                    Reset(App(b.arg, Var(y))),
                    frozenset({y}),
                    "shift-argument",
                )
            ]
        case _:
            return kind_mismatch(a, b)
