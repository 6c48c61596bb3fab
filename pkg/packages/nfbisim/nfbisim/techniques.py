"""
Up-to techniques and the per-calculus technique sets.

Each calculus has a full set and a strong subset; passive obligations may
only be discharged with strong techniques. `ctx` is a macro naming the
techniques that together give reasoning up to context in a calculus.

Usage:
    ts = technique_set(CalculusId.LAMBDA, "refl,red")
    ts = technique_set(CalculusId.LAMBDA, None, unsafe=["strong+=ectx"])
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Sequence

from .errors import TechniqueError
from .terms import CalculusId

log = logging.getLogger(__name__)


class Technique(str, Enum):
    REFL = "refl"
    RED = "red"
    LAM = "lam"
    SUBST = "subst"
    ECTX = "ectx"
    PCTX = "pctx"
    PCTXRST = "pctxrst"
    ECTXPURE = "ectxpure"
    RESULT = "result"
    ABORT = "abort"
    SUBSTV = "substv"
    SUBSTC = "substc"


T = Technique

FULL = {
    CalculusId.LAMBDA: frozenset({T.REFL, T.RED, T.LAM, T.SUBST, T.ECTX}),
    CalculusId.SHIFT_RESET: frozenset({T.REFL, T.RED, T.LAM, T.SUBST, T.PCTX, T.PCTXRST, T.ECTXPURE}),
    CalculusId.CALLCC_ABORT: frozenset({T.REFL, T.RESULT, T.ABORT, T.LAM, T.SUBSTV, T.SUBSTC, T.RED}),
}

NOT_STRONG = {
    CalculusId.LAMBDA: frozenset({T.ECTX}),
    CalculusId.SHIFT_RESET: frozenset({T.PCTX, T.PCTXRST, T.ECTXPURE}),
    CalculusId.CALLCC_ABORT: frozenset({T.SUBSTC}),
}

CTX_MACRO = {
    CalculusId.LAMBDA: frozenset({T.REFL, T.LAM, T.ECTX}),
    CalculusId.SHIFT_RESET: frozenset({T.REFL, T.LAM, T.PCTX, T.PCTXRST, T.ECTXPURE}),
    CalculusId.CALLCC_ABORT: frozenset({T.REFL, T.LAM, T.SUBSTC}),
}


def default_strong(calc: CalculusId) -> FrozenSet[Technique]:
    return FULL[calc] - NOT_STRONG[calc]


@dataclass(frozen=True)
class TechniqueSet:
    calculus: CalculusId
    full: FrozenSet[Technique]
    strong: FrozenSet[Technique]
    unsafe: bool = False

    def names(self, which: str = "full") -> str:
        chosen = self.full if which == "full" else self.strong
        return ",".join(sorted(t.value for t in chosen))


def parse_techniques(spec: str, calc: CalculusId) -> FrozenSet[Technique]:
    """Comma-separated technique names, `ctx` expanded for `calc`."""
    chosen = set()
    for raw in spec.split(","):
        name = raw.strip().lower()
        if not name:
            continue
        if name == "ctx":
            chosen |= CTX_MACRO[calc]
            continue
        try:
            t = Technique(name)
        except ValueError as e:
            raise TechniqueError(f"unknown technique {name!r}") from e
        if t not in FULL[calc]:
            raise TechniqueError(f"technique {name!r} does not apply to the {calc.value} calculus")
        chosen.add(t)
    return frozenset(chosen)


def parse_unsafe(unsafe: Sequence[str], calc: CalculusId) -> FrozenSet[Technique]:
    """Techniques added to the strong set by `strong+=LIST` entries."""
    extra: set = set()
    for item in unsafe:
        key, sep, value = item.partition("+=")
        if not sep or key.strip() != "strong":
            raise TechniqueError(f"unsupported --unsafe setting {item!r}; expected strong+=LIST")
        extra |= parse_techniques(value, calc)
    return frozenset(extra)


def technique_set(
    calc: CalculusId,
    spec: Optional[str] = None,
    unsafe: Sequence[str] = (),
) -> TechniqueSet:
    """Build the technique set for `calc`. Without `spec` every technique of
    the calculus is allowed. The strong subset is always the calculus's
    strong set cut down to the chosen techniques, unless `unsafe` carries
    `strong+=LIST` entries that enlarge it."""
    calc = CalculusId(calc)
    full = FULL[calc] if spec is None else parse_techniques(spec, calc)
    strong = default_strong(calc) & full
    extra = parse_unsafe(unsafe, calc)
    if extra:
        log.warning("strong set enlarged with %s; verdicts are UNSAFE", ",".join(sorted(t.value for t in extra)))
        full = full | extra
        strong = strong | extra
    return TechniqueSet(calc, frozenset(full), frozenset(strong), unsafe=bool(extra - default_strong(calc)))

