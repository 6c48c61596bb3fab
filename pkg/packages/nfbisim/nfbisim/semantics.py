"""
Shared shapes for the three reduction semantics: decompositions, normal
forms, evaluation results, and the test obligations normal forms give rise to.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, List, Tuple, Union

from .contexts import Ctx
from .terms import App, CtxApp, Shift, Term, Var

log = logging.getLogger(__name__)

BETA = "β"
CAPTURE = "capture"
RESET_VALUE = "reset-value"
ABORT = "abort"
CALLCC_CAPTURE = "callcc-capture"
RULES = (BETA, CAPTURE, RESET_VALUE, ABORT, CALLCC_CAPTURE)


# ----------------------------- normal forms ------------------------------

@dataclass(frozen=True)
class Value:
    value: Term
    kind = "value"

    @property
    def term(self) -> Term:
        return self.value


@dataclass(frozen=True)
class OpenStuck:
    """F[x v]"""
    ctx: Ctx
    head: str
    arg: Term
    kind = "open-stuck"

    @property
    def term(self) -> Term:
        return self.ctx.plug(App(Var(self.head), self.arg))


@dataclass(frozen=True)
class ControlStuck:
    """E[S v] with no enclosing reset"""
    ctx: Ctx
    arg: Term
    kind = "control-stuck"

    @property
    def term(self) -> Term:
        return self.ctx.plug(App(Shift(), self.arg))


@dataclass(frozen=True)
class ContextStuck:
    """k[v]"""
    k: str
    value: Term
    kind = "context-stuck"

    @property
    def term(self) -> Term:
        return CtxApp(self.k, self.value)


NormalForm = Union[Value, OpenStuck, ControlStuck, ContextStuck]


@dataclass(frozen=True)
class Redex:
    ctx: Ctx
    redex: Term
    rule: str


@dataclass(frozen=True)
class Normal:
    nf: NormalForm


Decomposition = Union[Redex, Normal]


# ----------------------------- evaluation --------------------------------

@dataclass(frozen=True)
class Step:
    rule: str
    term: Term


@dataclass(frozen=True)
class Evaluated:
    normal: NormalForm
    steps: int
    trace: Tuple[Step, ...] = ()


@dataclass(frozen=True)
class FuelExhausted:
    last: Term
    steps: int
    trace: Tuple[Step, ...] = ()


EvalResult = Union[Evaluated, FuelExhausted]


def run(
    advance: Callable[[Term], Union[Step, NormalForm]],
    t: Term,
    fuel: int,
    record: bool = False,
) -> EvalResult:
    """Iterate `advance` at most `fuel` times; it returns either the next
    step or the normal form `t` is already in."""
    if fuel < 0:
        raise ValueError(f"fuel must be >= 0, got {fuel}")
    trace: List[Step] = []
    for n in range(fuel + 1):
        step = advance(t)
        if not isinstance(step, Step):
            return Evaluated(step, n, tuple(trace))
        if n == fuel:
            break
        if record:
            trace.append(step)
        t = step.term
    log.debug("fuel exhausted after %d steps", fuel)
    return FuelExhausted(t, fuel, tuple(trace))


# ----------------------------- obligations -------------------------------

class Clause(str, Enum):
    PASSIVE = "passive"
    ACTIVE = "active"


@dataclass(frozen=True)
class Obligation:
    kind: Clause
    lhs: Term
    rhs: Term
    fresh: FrozenSet[str] = field(default_factory=frozenset)
    label: str = ""


@dataclass(frozen=True)
class Mismatch:
    reason: str
    lhs: NormalForm
    rhs: NormalForm


ObligationResult = Union[List[Obligation], Mismatch]


def value_test(v: Term, w: Term, x: str, label: str = "value", kind: Clause = Clause.PASSIVE) -> Obligation:
    """Values are compared by applying both to the same fresh variable. The
    test is passive for a value normal form; inside the open-stuck clause it
    is part of that clause and active."""
    return Obligation(kind, App(v, Var(x)), App(w, Var(x)), frozenset({x}), label)


def kind_mismatch(a: NormalForm, b: NormalForm) -> Mismatch:
    return Mismatch(f"{a.kind} vs {b.kind}", a, b)
