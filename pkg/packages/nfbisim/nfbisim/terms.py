"""
Locally nameless terms shared by the three calculi.

Bound variables are de Bruijn indices (`Bound`), free variables are names
(`Var`). A `Lam` keeps the name it was written with as a printing hint only;
hints take no part in equality, so alpha-equivalence is plain `==`.

Names starting with `#` come from the fresh-name supply (`#v0`, `#k3`, ...)
and are rejected by the parser on user input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, Mapping, Union

from .errors import CalculusError

GENERATED = "#"
USER_NAME = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


class CalculusId(str, Enum):
    LAMBDA = "lambda"
    SHIFT_RESET = "shiftreset"
    CALLCC_ABORT = "callcc"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Bound:
    index: int


@dataclass(frozen=True)
class Lam:
    hint: str = field(compare=False)
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Shift:
    pass


@dataclass(frozen=True)
class Reset:
    body: "Term"


@dataclass(frozen=True)
class CallCC:
    pass


@dataclass(frozen=True)
class Abort:
    body: "Term"


@dataclass(frozen=True)
class CtxApp:
    k: str
    body: "Term"


Term = Union[Var, Bound, Lam, App, Shift, Reset, CallCC, Abort, CtxApp]


def alpha_eq(t: Term, s: Term) -> bool:
    return t == s


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Lam, Shift, CallCC))


def is_generated(name: str) -> bool:
    return name.startswith(GENERATED)


# ----------------------------- free names --------------------------------

def _collect(t: Term, vars_: set, ctxs: set) -> None:
    match t:
        case Var(name):
            vars_.add(name)
        case Bound() | Shift() | CallCC():
            pass
        case Lam(_, body) | Reset(body) | Abort(body):
            _collect(body, vars_, ctxs)
        case App(fn, arg):
            _collect(fn, vars_, ctxs)
            _collect(arg, vars_, ctxs)
        case CtxApp(k, body):
            ctxs.add(k)
            _collect(body, vars_, ctxs)
        case _:
            raise TypeError(f"Unexpected term in free_vars: {t!r}")


def free_vars(t: Term) -> FrozenSet[str]:
    vs: set = set()
    _collect(t, vs, set())
    return frozenset(vs)


def free_ctx_vars(t: Term) -> FrozenSet[str]:
    ks: set = set()
    _collect(t, set(), ks)
    return frozenset(ks)


def free_names(*terms: Term) -> FrozenSet[str]:
    """Free variables and context variables of all `terms`, in one set."""
    vs: set = set()
    ks: set = set()
    for t in terms:
        _collect(t, vs, ks)
    return frozenset(vs | ks)


def _fresh(prefix: str, avoid: Iterable[str]) -> str:
    taken = set(avoid)
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def fresh_var(avoid: Iterable[str]) -> str:
    return _fresh("#v", avoid)


def fresh_ctx_var(avoid: Iterable[str]) -> str:
    return _fresh("#k", avoid)


# ----------------------------- binding -----------------------------------

def instantiate(t: Term, value: Term, depth: int = 0) -> Term:
    """Replace Bound(depth) by `value` (which must be locally closed)."""
    match t:
        case Bound(i):
            return value if i == depth else t
        case Var() | Shift() | CallCC():
            return t
        case Lam(hint, body):
            return Lam(hint, instantiate(body, value, depth + 1))
        case App(fn, arg):
            return App(instantiate(fn, value, depth), instantiate(arg, value, depth))
        case Reset(body):
            return Reset(instantiate(body, value, depth))
        case Abort(body):
            return Abort(instantiate(body, value, depth))
        case CtxApp(k, body):
            return CtxApp(k, instantiate(body, value, depth))
        case _:
            raise TypeError(f"Unexpected term in instantiate: {t!r}")


def abstract(t: Term, name: str, depth: int = 0) -> Term:
    """Turn free occurrences of `name` into Bound(depth)."""
    match t:
        case Var(n):
            return Bound(depth) if n == name else t
        case Bound() | Shift() | CallCC():
            return t
        case Lam(hint, body):
            return Lam(hint, abstract(body, name, depth + 1))
        case App(fn, arg):
            return App(abstract(fn, name, depth), abstract(arg, name, depth))
        case Reset(body):
            return Reset(abstract(body, name, depth))
        case Abort(body):
            return Abort(abstract(body, name, depth))
        case CtxApp(k, body):
            return CtxApp(k, abstract(body, name, depth))
        case _:
            raise TypeError(f"Unexpected term in abstract: {t!r}")


def lam(name: str, body: Term) -> Lam:
    """Build `\\name. body` from a named body."""
    return Lam(name, abstract(body, name))


def open_lam(t: Lam, name: str) -> Term:
    return instantiate(t.body, Var(name))


def is_locally_closed(t: Term, depth: int = 0) -> bool:
    match t:
        case Bound(i):
            return i < depth
        case Var() | Shift() | CallCC():
            return True
        case Lam(_, body):
            return is_locally_closed(body, depth + 1)
        case App(fn, arg):
            return is_locally_closed(fn, depth) and is_locally_closed(arg, depth)
        case Reset(body) | Abort(body) | CtxApp(_, body):
            return is_locally_closed(body, depth)
        case _:
            raise TypeError(f"Unexpected term in is_locally_closed: {t!r}")


def subst_value(t: Term, x: str, v: Term) -> Term:
    """Capture-avoiding t{v/x}. Binders whose hint would shadow a free name
    of `v` are re-hinted with generator names."""
    if not is_value(v):
        raise ValueError(f"subst_value expects a value, got {v!r}")
    if not is_locally_closed(v):
        raise ValueError(f"subst_value expects a locally closed value, got {v!r}")
    fv = free_vars(v)
    return _subst(t, x, v, fv)


def _subst(t: Term, x: str, v: Term, fv: FrozenSet[str]) -> Term:
    match t:
        case Var(n):
            return v if n == x else t
        case Bound() | Shift() | CallCC():
            return t
        case Lam(hint, body):
            new_body = _subst(body, x, v, fv)
            if hint in fv:
                hint = fresh_var(fv | free_vars(new_body))
            return Lam(hint, new_body)
        case App(fn, arg):
            return App(_subst(fn, x, v, fv), _subst(arg, x, v, fv))
        case Reset(body):
            return Reset(_subst(body, x, v, fv))
        case Abort(body):
            return Abort(_subst(body, x, v, fv))
        case CtxApp(k, body):
            return CtxApp(k, _subst(body, x, v, fv))
        case _:
            raise TypeError(f"Unexpected term in subst_value: {t!r}")


def rename(t: Term, mapping: Mapping[str, str]) -> Term:
    """Rename free variables and context variables; one map serves both."""
    if not mapping:
        return t
    match t:
        case Var(n):
            return Var(mapping.get(n, n))
        case Bound() | Shift() | CallCC():
            return t
        case Lam(hint, body):
            return Lam(hint, rename(body, mapping))
        case App(fn, arg):
            return App(rename(fn, mapping), rename(arg, mapping))
        case Reset(body):
            return Reset(rename(body, mapping))
        case Abort(body):
            return Abort(rename(body, mapping))
        case CtxApp(k, body):
            return CtxApp(mapping.get(k, k), rename(body, mapping))
        case _:
            raise TypeError(f"Unexpected term in rename: {t!r}")


def size(t: Term) -> int:
    match t:
        case Var() | Bound() | Shift() | CallCC():
            return 1
        case Lam(_, body) | Reset(body) | Abort(body) | CtxApp(_, body):
            return 1 + size(body)
        case App(fn, arg):
            return 1 + size(fn) + size(arg)
        case _:
            raise TypeError(f"Unexpected term in size: {t!r}")


# ----------------------------- validity ----------------------------------

_ONLY_IN = {
    Shift: CalculusId.SHIFT_RESET,
    Reset: CalculusId.SHIFT_RESET,
    CallCC: CalculusId.CALLCC_ABORT,
    Abort: CalculusId.CALLCC_ABORT,
    CtxApp: CalculusId.CALLCC_ABORT,
}

_SYNTAX = {Shift: "shift", Reset: "reset", CallCC: "callcc", Abort: "abort", CtxApp: "context application"}


def check_calculus(t: Term, calc: CalculusId, program: bool = True) -> Term:
    """Reject constructs foreign to `calc`, and context applications anywhere
    but the program root or directly under an abort. Returns `t`."""
    _check(t, CalculusId(calc), program)
    if not is_locally_closed(t):
        raise CalculusError("term has a dangling bound variable")
    return t


def _check(t: Term, calc: CalculusId, program_position: bool) -> None:
    owner = _ONLY_IN.get(type(t))
    if owner is not None and owner != calc:
        raise CalculusError(f"{_SYNTAX[type(t)]} is not part of the {calc.value} calculus")
    match t:
        case Var(name):
            if not (USER_NAME.match(name) or is_generated(name)):
                raise CalculusError(f"invalid variable name {name!r}")
        case Bound(i):
            if i < 0:
                raise CalculusError(f"negative de Bruijn index {i}")
        case Shift() | CallCC():
            pass
        case Lam(_, body) | Reset(body):
            _check(body, calc, False)
        case App(fn, arg):
            _check(fn, calc, False)
            _check(arg, calc, False)
        case Abort(body):
            _check(body, calc, True)
        case CtxApp(_, body):
            if not program_position:
                raise CalculusError("a context application may only appear at the program root or as an abort body")
            _check(body, calc, False)
        case _:
            raise TypeError(f"Unexpected term in check_calculus: {t!r}")
