"""
Call-by-value lambda calculus.

    E ::= [] | E t | v E
    E[(\\x. t) v]  ->  E[t{v/x}]

Irreducible terms are values or open stuck terms E[x v].
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from .contexts import Ctx, descend
from .semantics import (
    BETA,
    Clause,
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
from .terms import App, Lam, Term, Var, free_names, fresh_var, instantiate, is_value


def decompose_l(t: Term) -> Decomposition:
    frames, focus = descend(t)
    ctx = Ctx(frames)
    match focus:
        case App(Lam(), _):
            return Redex(ctx, focus, BETA)
        case App(Var(x), arg):
            return Normal(OpenStuck(ctx, x, arg))
        case _ if is_value(focus) and not frames:
            return Normal(Value(focus))
        case _:
            raise TypeError(f"Unexpected term in decompose_l: {focus!r}")


def contract_beta(redex: App) -> Term:
    return instantiate(redex.fn.body, redex.arg)


def advance_l(t: Term) -> Union[Step, NormalForm]:
    d = decompose_l(t)
    if isinstance(d, Normal):
        return d.nf
    return Step(BETA, d.ctx.plug(contract_beta(d.redex)))


def step_l(t: Term) -> Optional[Term]:
    s = advance_l(t)
    return s.term if isinstance(s, Step) else None


def eval_l(t: Term, fuel: int, record: bool = False) -> EvalResult:
    return run(advance_l, t, fuel, record)


def obligations_l(a: NormalForm, b: NormalForm, avoid: Iterable[str] = ()) -> ObligationResult:
    avoid = set(avoid) | free_names(a.term, b.term)
    match a, b:
        case Value(v), Value(w):
            return [value_test(v, w, fresh_var(avoid))]
        case OpenStuck(), OpenStuck() if a.head == b.head:
            x = fresh_var(avoid)
            y = fresh_var(avoid | {x})
            return [
                Obligation(Clause.ACTIVE, a.ctx.plug(Var(x)), b.ctx.plug(Var(x)), frozenset({x}), "context"),
                value_test(a.arg, b.arg, y, "argument", Clause.ACTIVE),
            ]
        case OpenStuck(), OpenStuck():
            return Mismatch(f"head variables differ: {a.head} vs {b.head}", a, b)
        case _:
            return kind_mismatch(a, b)
