"""
Concrete syntax for terms: a Lark LALR parser and the matching printer.

    term  ::= atom+                      application, left-associative
            | atom* lam                  a trailing lambda extends to the right
    lam   ::= ('\\' | 'λ') var+ '.' term
    atom  ::= var | 'S' | 'K' | '<' term '>' | 'A' '(' term ')'
            | ctxvar '[' term ']' | '(' term ')'

Usage:
    t = parse_term(r"<S (\\k. k (\\x. x))>", CalculusId.SHIFT_RESET)
    print(print_term(t))
"""

from __future__ import annotations

from functools import reduce
from typing import List

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .errors import NfbisimError, TermSyntaxError
from .terms import (
    USER_NAME,
    Abort,
    App,
    Bound,
    CallCC,
    CalculusId,
    CtxApp,
    Lam,
    Reset,
    Shift,
    Term,
    Var,
    check_calculus,
    free_vars,
    fresh_var,
    is_generated,
)
from .terms import lam as bind_lam

GRAMMAR = r"""
    ?start: term

    ?term: atoms
         | atoms lam        -> app_lam
         | lam

    atoms: atom+

    lam: _LAMBDA ident+ "." term

    ?atom: ident                  -> var
         | ident "[" term "]"     -> ctxapp
         | "S"                    -> shift
         | "K"                    -> callcc
         | "<" term ">"           -> reset
         | "A" "(" term ")"       -> abort
         | "(" term ")"

    ident: NAME | GENNAME

    _LAMBDA: "\\" | "λ"
    NAME: /[a-z][A-Za-z0-9_]*/
    GENNAME: /#[vk][0-9]+/

    %import common.WS
    %ignore WS
"""

_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=False)


@v_args(inline=True)
class _TermBuilder(Transformer):
    def __init__(self, allow_generated: bool):
        super().__init__()
        self.allow_generated = allow_generated

    def ident(self, tok):
        name = str(tok)
        if is_generated(name) and not self.allow_generated:
            raise TermSyntaxError(f"reserved generator name {name!r}", tok.line, tok.column)
        return name

    def var(self, name):
        return Var(name)

    def ctxapp(self, name, body):
        return CtxApp(name, body)

    def shift(self):
        return Shift()

    def callcc(self):
        return CallCC()

    def reset(self, body):
        return Reset(body)

    def abort(self, body):
        return Abort(body)

    def atoms(self, *items):
        return reduce(App, items)

    def app_lam(self, fn, fn_arg):
        return App(fn, fn_arg)

    def lam(self, *parts):
        *binders, body = parts
        for name in reversed(binders):
            body = bind_lam(name, body)
        return body


def parse_term(text: str, calc: CalculusId, allow_generated: bool = False) -> Term:
    """Parse `text` and check it belongs to `calc`."""
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        raise TermSyntaxError(f"cannot parse {text!r}", getattr(e, "line", None), getattr(e, "column", None)) from e
    try:
        term = _TermBuilder(allow_generated).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, NfbisimError):
            raise e.orig_exc from None
        raise
    return check_calculus(term, calc)


# ----------------------------- printing ----------------------------------

_TOP, _FN, _ARG = 0, 1, 2


def _binder_name(hint: str, body: Term, scope: List[str], readable: bool) -> str:
    taken = set(scope) | free_vars(body)
    if readable and not USER_NAME.match(hint):
        hint = "x"
    valid = bool(USER_NAME.match(hint)) or is_generated(hint)
    if valid and hint not in taken:
        return hint
    if not valid or is_generated(hint):
        return fresh_var(taken)
    i = 1
    while f"{hint}{i}" in taken:
        i += 1
    return f"{hint}{i}"


def _show(t: Term, scope: List[str], level: int, readable: bool) -> str:
    match t:
        case Var(name):
            return name
        case Bound(i):
            return scope[-1 - i] if i < len(scope) else f"?{i}"
        case Shift():
            return "S"
        case CallCC():
            return "K"
        case Reset(body):
            return f"<{_show(body, scope, _TOP, readable)}>"
        case Abort(body):
            return f"A({_show(body, scope, _TOP, readable)})"
        case CtxApp(k, body):
            return f"{k}[{_show(body, scope, _TOP, readable)}]"
        case Lam(hint, body):
            name = _binder_name(hint, body, scope, readable)
            s = f"\\{name}. {_show(body, scope + [name], _TOP, readable)}"
            return s if level == _TOP else f"({s})"
        case App(fn, arg):
            s = f"{_show(fn, scope, _FN, readable)} {_show(arg, scope, _ARG, readable)}"
            return f"({s})" if level == _ARG else s
        case _:
            raise TypeError(f"Unexpected term in print_term: {t!r}")


def print_term(t: Term, readable: bool = False) -> str:
    """With `readable`, generator names on binders are replaced by user
    names so the output parses without `allow_generated`."""
    return _show(t, [], _TOP, readable)
