"""
Random terms for the property suites, plus a brute-force decomposition
oracle that reads evaluation positions straight off the context grammars.
"""

import random
from typing import Iterator, List, Tuple

from nfbisim.contexts import AppL, AppR, Ctx
from nfbisim.terms import (
    Abort,
    App,
    CalculusId,
    CallCC,
    CtxApp,
    Lam,
    Reset,
    Shift,
    Term,
    Var,
    is_value,
    lam,
)

FREE = ("f", "g", "y")
BINDERS = ("a", "b", "c")
MAX_SIZE = 12


def random_term(rng: random.Random, calc: CalculusId, size: int = MAX_SIZE, scope: Tuple[str, ...] = ()) -> Term:
    if size <= 1:
        return _leaf(rng, calc, scope)
    roll = rng.random()
    if roll < 0.45 and size >= 3:
        left = rng.randint(1, size - 2)
        return App(random_term(rng, calc, left, scope), random_term(rng, calc, size - 1 - left, scope))
    if roll < 0.75:
        name = rng.choice(BINDERS)
        return lam(name, random_term(rng, calc, size - 1, scope + (name,)))
    if calc is CalculusId.SHIFT_RESET and roll < 0.9:
        return Reset(random_term(rng, calc, size - 1, scope))
    if calc is CalculusId.CALLCC_ABORT and roll < 0.9:
        body = random_term(rng, calc, size - 2, scope)
        return Abort(CtxApp("k", body) if rng.random() < 0.6 else body)
    return _leaf(rng, calc, scope)


def _leaf(rng: random.Random, calc: CalculusId, scope: Tuple[str, ...]) -> Term:
    roll = rng.random()
    if calc is CalculusId.SHIFT_RESET and roll < 0.2:
        return Shift()
    if calc is CalculusId.CALLCC_ABORT and roll < 0.2:
        return CallCC()
    names = scope + FREE if scope and rng.random() < 0.7 else FREE
    return Var(rng.choice(names))


def random_value(rng: random.Random, calc: CalculusId, size: int = 5) -> Term:
    while True:
        t = random_term(rng, calc, size)
        if is_value(t):
            return t


def random_program(rng: random.Random, size: int = MAX_SIZE) -> Term:
    t = random_term(rng, CalculusId.CALLCC_ABORT, size - 1)
    return CtxApp("k", t) if rng.random() < 0.8 else t


def random_program_ctx(rng: random.Random, size: int = 4) -> Ctx:
    """A program context over context variable j (never k)."""
    frames = []
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            frames.append(AppL(random_term(rng, CalculusId.LAMBDA, size)))
        else:
            frames.append(AppR(random_value(rng, CalculusId.LAMBDA, size)))
    return Ctx(tuple(frames), "j" if rng.random() < 0.7 else None)


# ----------------------------- decomposition oracle ----------------------

Path = Tuple[int, ...]


def eval_positions(t: Term, through_reset: bool) -> Iterator[Tuple[Path, Term]]:
    """Every position of `t` an evaluation context can reach, by the
    grammar E ::= [] | E t | v E (| <E> with resets)."""
    yield (), t
    match t:
        case App(fn, arg):
            for p, s in eval_positions(fn, through_reset):
                yield (0,) + p, s
            if is_value(fn):
                for p, s in eval_positions(arg, through_reset):
                    yield (1,) + p, s
        case Reset(body) if through_reset:
            for p, s in eval_positions(body, through_reset):
                yield (2,) + p, s


def _is_pure_capture(body: Term) -> bool:
    return any(
        isinstance(s, App) and isinstance(s.fn, Shift) and is_value(s.arg)
        for p, s in eval_positions(body, through_reset=False)
    )


def redex_positions(t: Term, calc: CalculusId) -> List[Tuple[Path, Term]]:
    body = t.body if calc is CalculusId.CALLCC_ABORT and isinstance(t, CtxApp) else t
    found = []
    for p, s in eval_positions(body, through_reset=calc is CalculusId.SHIFT_RESET):
        match s:
            case App(Lam(), arg) if is_value(arg):
                found.append((p, s))
            case App(CallCC(), arg) if is_value(arg):
                found.append((p, s))
            case Abort():
                found.append((p, s))
            case Reset(inner) if is_value(inner) or _is_pure_capture(inner):
                found.append((p, s))
    return found
