"""
Lambda calculus with call/cc (K) and abort (A), over programs.

    p ::= t | k[t]                       programs, k a context variable
    F ::= E | k[E]                       program contexts

    F[(\\x. t) v]  ->  F[t{v/x}]
    F[K v]        ->  F[v (\\y. A(F[y]))]       y not in fv(F)
    F[A(q)]       ->  q

Irreducible programs are bare values, open stuck programs F[x v], and
context-stuck programs k[v]. Context variables stand for unknown program
contexts and are instantiated by context substitution.
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from .calc_lambda import contract_beta
from .contexts import Ctx, descend
from .semantics import (
    ABORT,
    BETA,
    CALLCC_CAPTURE,
    Clause,
    ContextStuck,
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
)
from .terms import (
    Abort,
    App,
    Bound,
    CallCC,
    CtxApp,
    Lam,
    Reset,
    Term,
    Var,
    free_names,
    free_vars,
    fresh_ctx_var,
    fresh_var,
    is_value,
)


def split_program(p: Term) -> tuple:
    """(head, body) of a program; head is None for a bare term."""
    if isinstance(p, CtxApp):
        return p.k, p.body
    return None, p


def lift(t: Term, avoid: Iterable[str] = ()) -> Term:
    """Put a term in a fresh abstract context, k[t]."""
    return CtxApp(fresh_ctx_var(set(avoid) | free_names(t)), t)


def decompose_cc(p: Term) -> Decomposition:
    head, body = split_program(p)
    frames, focus = descend(body)
    ctx = Ctx(frames, head)
    match focus:
        case App(Lam(), _):
            return Redex(ctx, focus, BETA)
        case App(Var(x), arg):
            return Normal(OpenStuck(ctx, x, arg))
        case App(CallCC(), _):
            return Redex(ctx, focus, CALLCC_CAPTURE)
        case Abort():
            return Redex(ctx, focus, ABORT)
        case _ if is_value(focus) and not frames:
            return Normal(ContextStuck(head, focus) if head is not None else Value(focus))
        case _:
            raise TypeError(f"Unexpected term in decompose_cc: {focus!r}")


def contract_callcc(ctx: Ctx, redex: App) -> Term:
    v = redex.arg
    hint = fresh_var(ctx.free_vars() | free_vars(v))
    return ctx.plug(App(v, Lam(hint, Abort(ctx.plug(Bound(0))))))


def advance_cc(p: Term) -> Union[Step, NormalForm]:
    d = decompose_cc(p)
    if isinstance(d, Normal):
        return d.nf
    if d.rule == BETA:
        return Step(BETA, d.ctx.plug(contract_beta(d.redex)))
    if d.rule == CALLCC_CAPTURE:
        return Step(CALLCC_CAPTURE, contract_callcc(d.ctx, d.redex))
    return Step(ABORT, d.redex.body)


def step_cc(p: Term) -> Optional[Term]:
    s = advance_cc(p)
    return s.term if isinstance(s, Step) else None


def eval_cc(p: Term, fuel: int, record: bool = False) -> EvalResult:
    return run(advance_cc, p, fuel, record)


def ctx_subst(p: Term, k: str, f: Ctx) -> Term:
    """p{F/k}: (k[t]){F/k} = F[t{F/k}], other constructs homomorphically."""
    match p:
        case CtxApp(k2, body) if k2 == k:
            return f.plug(ctx_subst(body, k, f))
        case CtxApp(k2, body):
            return CtxApp(k2, ctx_subst(body, k, f))
        case Var() | Bound() | CallCC():
            return p
        case Lam(hint, body):
            return Lam(hint, ctx_subst(body, k, f))
        case App(fn, arg):
            return App(ctx_subst(fn, k, f), ctx_subst(arg, k, f))
        case Abort(body):
            return Abort(ctx_subst(body, k, f))
        case Reset(body):
            return Reset(ctx_subst(body, k, f))
        case _:
            raise TypeError(f"Unexpected term in ctx_subst: {p!r}")


def lifted_value_test(v: Term, w: Term, avoid: set, label: str, kind: Clause = Clause.PASSIVE) -> Obligation:
    """k[v x] against k[w x] with k and x fresh."""
    k = fresh_ctx_var(avoid)
    x = fresh_var(avoid)
    return Obligation(
        kind,
        CtxApp(k, App(v, Var(x))),
        CtxApp(k, App(w, Var(x))),
        frozenset({k, x}),
        label,
    )


def obligations_cc(a: NormalForm, b: NormalForm, avoid: Iterable[str] = ()) -> ObligationResult:
    avoid = set(avoid) | free_names(a.term, b.term)
    match a, b:
        case Value(), Value():
            return []
        case ContextStuck(), ContextStuck() if a.k == b.k:
            return [lifted_value_test(a.value, b.value, avoid, "value")]
        case ContextStuck(), ContextStuck():
            return Mismatch(f"context variables differ: {a.k} vs {b.k}", a, b)
        case OpenStuck(), OpenStuck() if a.head == b.head:
            x = fresh_var(avoid)
            return [
                Obligation(Clause.ACTIVE, a.ctx.plug(Var(x)), b.ctx.plug(Var(x)), frozenset({x}), "context"),
                lifted_value_test(a.arg, b.arg, avoid | {x}, "argument", Clause.ACTIVE),
            ]
        case OpenStuck(), OpenStuck():
            return Mismatch(f"head variables differ: {a.head} vs {b.head}", a, b)
        case _:
            return kind_mismatch(a, b)
