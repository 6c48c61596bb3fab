"""
Matching goal pairs against schematic relation pairs.

A pair's fresh names are pattern variables that rename injectively, and
never onto the pair's other free names. Optionally one fresh variable is a
value hole (solved separately on each side, for substitutive closure) or
one fresh context variable is a context hole (for context substitution).
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterator, Optional, Tuple

from .contexts import Ctx, program_splits
from .relation import RelPair
from .terms import (
    Abort,
    App,
    Bound,
    CallCC,
    CtxApp,
    Lam,
    Reset,
    Shift,
    Term,
    Var,
    is_locally_closed,
    is_value,
)

LHS, RHS = 0, 1


class Matcher:
    def __init__(
        self,
        fresh: FrozenSet[str],
        fixed: FrozenSet[str],
        value_hole: Optional[str] = None,
        ctx_hole: Optional[str] = None,
    ):
        self.fresh = fresh
        self.fixed = fixed
        self.value_hole = value_hole
        self.ctx_hole = ctx_hole
        self.names: Dict[str, str] = {}
        self.targets: set = set()
        self.values: Dict[Tuple[int, str], Term] = {}
        self.ctxs: Dict[Tuple[int, str], Ctx] = {}

    def _name(self, n: str, target: str) -> Iterator[None]:
        if n not in self.fresh:
            if n == target:
                yield
            return
        if n in self.names:
            if self.names[n] == target:
                yield
            return
        if target in self.fixed or target in self.targets:
            return
        self.names[n] = target
        self.targets.add(target)
        yield
        del self.names[n]
        self.targets.discard(target)

    def _hole_value(self, key: Tuple[int, str], g: Term) -> Iterator[None]:
        if not is_value(g) or not is_locally_closed(g):
            return
        if key in self.values:
            if self.values[key] == g:
                yield
            return
        self.values[key] = g
        yield
        del self.values[key]

    def _hole_ctx(self, key: Tuple[int, str], body: Term, g: Term, side: int) -> Iterator[None]:
        for ctx, focus in program_splits(g):
            if not is_locally_closed(ctx.plug(Var("_"))):
                continue
            if key in self.ctxs:
                if self.ctxs[key] == ctx:
                    yield from self.match(body, focus, side)
                continue
            self.ctxs[key] = ctx
            yield from self.match(body, focus, side)
            del self.ctxs[key]

    def match(self, p: Term, g: Term, side: int) -> Iterator[None]:
        """Yield once per way `g` is an instance of pattern `p`."""
        match p:
            case Var(n) if n == self.value_hole:
                yield from self._hole_value((side, n), g)
            case Var(n):
                if isinstance(g, Var):
                    yield from self._name(n, g.name)
            case CtxApp(k, body) if k == self.ctx_hole:
                yield from self._hole_ctx((side, k), body, g, side)
            case CtxApp(k, body):
                if isinstance(g, CtxApp):
                    for _ in self._name(k, g.k):
                        yield from self.match(body, g.body, side)
            case App(fn, arg):
                if isinstance(g, App):
                    for _ in self.match(fn, g.fn, side):
                        yield from self.match(arg, g.arg, side)
            case Lam(_, body):
                if isinstance(g, Lam):
                    yield from self.match(body, g.body, side)
            case Reset(body):
                if isinstance(g, Reset):
                    yield from self.match(body, g.body, side)
            case Abort(body):
                if isinstance(g, Abort):
                    yield from self.match(body, g.body, side)
            case Bound() | Shift() | CallCC():
                if p == g:
                    yield
            case _:
                raise TypeError(f"Unexpected term in match: {p!r}")

    def pair(self, pr: RelPair, lhs: Term, rhs: Term) -> Iterator[None]:
        for _ in self.match(pr.lhs, lhs, LHS):
            yield from self.match(pr.rhs, rhs, RHS)


def match_modulo_fresh(lhs: Term, rhs: Term, pr: RelPair) -> Optional[Dict[str, str]]:
    """Injective renaming of `pr`'s fresh names under which `pr` is
    alpha-equal to (lhs, rhs), or None."""
    if type(lhs) is not type(pr.lhs) or type(rhs) is not type(pr.rhs):
        return None
    m = Matcher(pr.fresh, pr.fixed())
    for _ in m.pair(pr, lhs, rhs):
        return dict(m.names)
    return None


def value_hole_matches(lhs: Term, rhs: Term, pr: RelPair, x: str) -> Iterator[Tuple[Dict[str, str], Optional[Term], Optional[Term]]]:
    """Solutions of (lhs, rhs) = (t{v/x}, s{w/x}) for (t, s) an instance of
    `pr`; v or w is None when x does not occur on that side."""
    m = Matcher(pr.fresh - {x}, pr.fixed(), value_hole=x)
    for _ in m.pair(pr, lhs, rhs):
        yield dict(m.names), m.values.get((LHS, x)), m.values.get((RHS, x))


def ctx_hole_matches(lhs: Term, rhs: Term, pr: RelPair, k: str) -> Iterator[Tuple[Dict[str, str], Optional[Ctx], Optional[Ctx]]]:
    """Solutions of (lhs, rhs) = (p{F/k}, q{F'/k}) for (p, q) an instance of `pr`."""
    m = Matcher(pr.fresh - {k}, pr.fixed(), ctx_hole=k)
    for _ in m.pair(pr, lhs, rhs):
        yield dict(m.names), m.ctxs.get((LHS, k)), m.ctxs.get((RHS, k))


def value_difference(lhs: Term, rhs: Term, x: str) -> Optional[Tuple[Term, Term, Term]]:
    """(t, v, w) with lhs = t{v/x} and rhs = t{w/x}, cutting at the topmost
    positions where the two sides differ. Each cut must separate two values
    and every cut the same pair. None when the sides are equal, differ at
    the root, or differ anywhere else."""
    if lhs == rhs:
        return None
    found: list = []

    def walk(s: Term, t: Term, root: bool) -> Optional[Term]:
        if s == t:
            return s
        if not root and is_value(s) and is_value(t):
            if not (is_locally_closed(s) and is_locally_closed(t)):
                return None
            if found and found[0] != (s, t):
                return None
            found[:] = [(s, t)]
            return Var(x)
        match s, t:
            case App(f1, a1), App(f2, a2):
                fn = walk(f1, f2, False)
                arg = walk(a1, a2, False) if fn is not None else None
                return App(fn, arg) if arg is not None else None
            case Lam(hint, b1), Lam(_, b2):
                body = walk(b1, b2, False)
                return Lam(hint, body) if body is not None else None
            case Reset(b1), Reset(b2):
                body = walk(b1, b2, False)
                return Reset(body) if body is not None else None
            case Abort(b1), Abort(b2):
                body = walk(b1, b2, False)
                return Abort(body) if body is not None else None
            case CtxApp(k1, b1), CtxApp(k2, b2) if k1 == k2:
                body = walk(b1, b2, root)
                return CtxApp(k1, body) if body is not None else None
            case _:
                return None

    template = walk(lhs, rhs, True)
    if template is None or not found:
        return None
    v, w = found[0]
    return template, v, w
