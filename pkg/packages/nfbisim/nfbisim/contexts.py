"""
Evaluation contexts as frame lists, outermost frame first.

One `Ctx` type serves every calculus: lambda contexts use `AppL`/`AppR`,
shift/reset adds `ResetFrame`, and call/cc program contexts carry an
optional head context variable (`k[E]`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterator, Mapping, Optional, Tuple, Union

from .terms import App, CtxApp, Reset, Term, free_ctx_vars, free_vars, is_value, rename


@dataclass(frozen=True)
class AppL:
    """[] arg"""
    arg: Term


@dataclass(frozen=True)
class AppR:
    """fn [] with fn a value"""
    fn: Term


@dataclass(frozen=True)
class ResetFrame:
    pass


Frame = Union[AppL, AppR, ResetFrame]
Frames = Tuple[Frame, ...]


def plug_frames(frames: Frames, t: Term) -> Term:
    for frame in reversed(frames):
        match frame:
            case AppL(arg):
                t = App(t, arg)
            case AppR(fn):
                t = App(fn, t)
            case ResetFrame():
                t = Reset(t)
            case _:
                raise TypeError(f"Unexpected frame: {frame!r}")
    return t


def _frame_terms(frames: Frames) -> Iterator[Term]:
    for f in frames:
        match f:
            case AppL(arg):
                yield arg
            case AppR(fn):
                yield fn


def _rename_frame(f: Frame, mapping: Mapping[str, str]) -> Frame:
    match f:
        case AppL(arg):
            return AppL(rename(arg, mapping))
        case AppR(fn):
            return AppR(rename(fn, mapping))
        case _:
            return f


@dataclass(frozen=True)
class Ctx:
    frames: Frames = ()
    head: Optional[str] = None

    def plug(self, t: Term) -> Term:
        body = plug_frames(self.frames, t)
        return CtxApp(self.head, body) if self.head is not None else body

    def is_pure(self) -> bool:
        return not any(isinstance(f, ResetFrame) for f in self.frames)

    def is_hole(self) -> bool:
        return not self.frames and self.head is None

    def free_vars(self) -> FrozenSet[str]:
        return frozenset().union(*(free_vars(t) for t in _frame_terms(self.frames)))

    def free_ctx_vars(self) -> FrozenSet[str]:
        ks = frozenset().union(*(free_ctx_vars(t) for t in _frame_terms(self.frames)))
        return ks | {self.head} if self.head is not None else ks

    def rename(self, mapping: Mapping[str, str]) -> "Ctx":
        frames = tuple(_rename_frame(f, mapping) for f in self.frames)
        head = mapping.get(self.head, self.head) if self.head is not None else None
        return Ctx(frames, head)


HOLE = Ctx()

# Per-calculus names; all of them are frame lists.
EvalCtxL = Ctx
PureCtx = Ctx
EvalCtxSR = Ctx
ProgCtx = Ctx


def descend(t: Term, through_reset: bool = False) -> Tuple[Frames, Term]:
    """Walk the call-by-value evaluation order down to the point where `t`
    either contracts or is stuck: left operand first, then right operand,
    and (with `through_reset`) into reset bodies that are not values."""
    frames = []
    while True:
        match t:
            case App(fn, arg) if not is_value(fn):
                frames.append(AppL(arg))
                t = fn
            case App(fn, arg) if not is_value(arg):
                frames.append(AppR(fn))
                t = arg
            case Reset(body) if through_reset and not is_value(body):
                frames.append(ResetFrame())
                t = body
            case _:
                return tuple(frames), t


def innermost_reset(frames: Frames) -> int:
    """Index of the reset frame closest to the hole, or -1."""
    for i in range(len(frames) - 1, -1, -1):
        if isinstance(frames[i], ResetFrame):
            return i
    return -1


def spine_splits(t: Term, through_reset: bool = False) -> Iterator[Tuple[Frames, Term]]:
    """Every way to write `t` as E[focus] with E an evaluation context,
    root first. With `through_reset`, contexts may contain reset frames."""
    yield (), t
    match t:
        case App(fn, arg):
            for frames, focus in spine_splits(fn, through_reset):
                yield (AppL(arg),) + frames, focus
            if is_value(fn):
                for frames, focus in spine_splits(arg, through_reset):
                    yield (AppR(fn),) + frames, focus
        case Reset(body) if through_reset:
            for frames, focus in spine_splits(body, through_reset):
                yield (ResetFrame(),) + frames, focus


def program_splits(p: Term) -> Iterator[Tuple[Ctx, Term]]:
    """Every way to write program `p` as F[focus]."""
    if isinstance(p, CtxApp):
        for frames, focus in spine_splits(p.body):
            yield Ctx(frames, p.k), focus
    else:
        for frames, focus in spine_splits(p):
            yield Ctx(frames), focus
