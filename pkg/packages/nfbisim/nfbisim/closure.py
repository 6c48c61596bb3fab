"""
Membership in the closure of a relation under up-to techniques.

The search runs backwards from a goal pair: the goal is a member if it is
an instance of a base pair, or if some allowed technique concludes it from
premises that are members in turn. Iterative deepening bounds the height
of the derivation; results are memoised per search instance, which is
tied to one set of base pairs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .calculi import Calculus
from .contexts import plug_frames, program_splits, spine_splits
from .matching import ctx_hole_matches, match_modulo_fresh, value_difference, value_hole_matches
from .relation import RelPair
from .semantics import Evaluated
from .techniques import Technique
from .terms import (
    Abort,
    App,
    CtxApp,
    Lam,
    Reset,
    Term,
    Var,
    free_ctx_vars,
    free_names,
    free_vars,
    fresh_ctx_var,
    fresh_var,
    is_value,
    open_lam,
)

log = logging.getLogger(__name__)

MEMBER = "member"
T = Technique

# nodes visited per membership query before giving up
SEARCH_BUDGET = 200_000

# intermediate reducts tried by up to reduction, besides the normal form
REDUCT_PREFIX = 2


@dataclass(frozen=True)
class Proof:
    """Derivation of closure membership: a `member` leaf names the base pair
    and the renaming of its fresh names; other nodes name a technique."""
    rule: str
    lhs: Term
    rhs: Term
    premises: Tuple["Proof", ...] = ()
    pair: str = ""
    renaming: Tuple[Tuple[str, str], ...] = ()

    def techniques(self) -> FrozenSet[Technique]:
        found = set()
        stack: List[Proof] = [self]
        while stack:
            p = stack.pop()
            if p.rule != MEMBER:
                found.add(Technique(p.rule))
            stack.extend(p.premises)
        return frozenset(found)

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)


MatchProof = Proof


def _bare_value(t: Term) -> bool:
    return is_value(t)


def _pure(t: Term) -> bool:
    return is_value(t) or isinstance(t, Reset)


def _bare_var(t: Term) -> bool:
    """A variable, alone or as the whole body of a program."""
    return isinstance(t.body if isinstance(t, CtxApp) else t, Var)


class ClosureSearch:
    def __init__(self, calculus: Calculus, base: Sequence[RelPair], fuel: int, budget: int = SEARCH_BUDGET):
        self.calc = calculus
        self.base = tuple(base)
        self.fuel = fuel
        self.budget = budget
        self._nf: Dict[Term, Term] = {}
        self._reducts: Dict[Term, Tuple[Term, ...]] = {}
        self._proved: Dict[tuple, Proof] = {}
        self._failed: Dict[tuple, int] = {}
        self._nodes = 0
        self._rules = (
            (T.LAM, self._lam),
            (T.ABORT, self._abort),
            (T.RED, self._red),
            (T.SUBST, self._subst),
            (T.SUBSTV, self._subst),
            (T.ECTX, self._ectx),
            (T.PCTX, self._pctx),
            (T.PCTXRST, self._pctxrst),
            (T.ECTXPURE, self._ectxpure),
            (T.SUBSTC, self._substc),
        )

    # -- entry point -------------------------------------------------------

    def member(self, lhs: Term, rhs: Term, allowed: Iterable[Technique], depth: int) -> Optional[Proof]:
        allowed = frozenset(allowed)
        self._nodes = 0
        for d in range(depth + 1):
            proof = self._search(lhs, rhs, allowed, d, False)
            if proof is not None:
                log.debug("closure member at depth %d via %s", d, proof.rule)
                return proof
            if self._nodes > self.budget:
                log.debug("closure search budget exhausted at depth %d", d)
                self._failed.clear()
                break
        return None

    def normalize(self, t: Term) -> Term:
        hit = self._nf.get(t)
        if hit is None:
            r = self.calc.evaluate(t, self.fuel)
            hit = r.normal.term if isinstance(r, Evaluated) else r.last
            self._nf[t] = hit
        return hit

    def reducts(self, t: Term) -> Tuple[Term, ...]:
        """`t`, its first REDUCT_PREFIX reducts, then its normal form (or the
        last term reached within fuel)."""
        hit = self._reducts.get(t)
        if hit is None:
            seq = [t]
            while len(seq) <= REDUCT_PREFIX:
                nxt = self.calc.step(seq[-1])
                if nxt is None:
                    break
                seq.append(nxt)
            nf = self.normalize(t)
            if seq[-1] != nf:
                seq.append(nf)
            hit = tuple(seq)
            self._reducts[t] = hit
        return hit

    # -- search ------------------------------------------------------------

    def _search(self, a: Term, b: Term, allowed: FrozenSet[Technique], d: int, no_red: bool) -> Optional[Proof]:
        key = (a, b, allowed, no_red)
        hit = self._proved.get(key)
        if hit is not None:
            return hit
        if self._failed.get(key, -1) >= d or self._nodes > self.budget:
            return None
        self._nodes += 1
        proof = self._conclude(a, b, allowed, d, no_red)
        if proof is not None:
            self._proved[key] = proof
        else:
            self._failed[key] = max(d, self._failed.get(key, -1))
        return proof

    def _conclude(self, a: Term, b: Term, allowed: FrozenSet[Technique], d: int, no_red: bool) -> Optional[Proof]:
        for pr in self.base:
            m = match_modulo_fresh(a, b, pr)
            if m is not None:
                return Proof(MEMBER, a, b, pair=pr.label, renaming=tuple(sorted(m.items())))
        if T.REFL in allowed and a == b:
            return Proof(T.REFL.value, a, b)
        if T.RESULT in allowed and _bare_value(a) and _bare_value(b):
            return Proof(T.RESULT.value, a, b)
        if d == 0:
            return None
        for technique, rule in self._rules:
            if technique not in allowed or (technique is T.RED and no_red):
                continue
            proof = rule(technique, a, b, allowed, d)
            if proof is not None:
                return proof
        return None

    def _sub(self, a: Term, b: Term, allowed, d: int, no_red: bool = False) -> Optional[Proof]:
        return self._search(a, b, allowed, d - 1, no_red)

    # -- techniques --------------------------------------------------------

    def _lam(self, technique, a, b, allowed, d):
        names = free_names(a, b)
        x = fresh_var(names)
        if self.calc.programs:
            if not (isinstance(a, CtxApp) and isinstance(b, CtxApp) and a.k == b.k):
                return None
            if not (isinstance(a.body, Lam) and isinstance(b.body, Lam)):
                return None
            k = fresh_ctx_var(names)
            goal = (CtxApp(k, open_lam(a.body, x)), CtxApp(k, open_lam(b.body, x)))
        else:
            if not (isinstance(a, Lam) and isinstance(b, Lam)):
                return None
            goal = (open_lam(a, x), open_lam(b, x))
        sub = self._sub(*goal, allowed, d)
        return Proof(technique.value, a, b, (sub,)) if sub else None

    def _abort(self, technique, a, b, allowed, d):
        if not (isinstance(a, CtxApp) and isinstance(b, CtxApp) and a.k == b.k):
            return None
        if not (isinstance(a.body, Abort) and isinstance(b.body, Abort)):
            return None
        sub = self._sub(a.body.body, b.body.body, allowed, d)
        return Proof(technique.value, a, b, (sub,)) if sub else None

    def _red(self, technique, a, b, allowed, d):
        ra, rb = self.reducts(a), self.reducts(b)
        na, nb = len(ra) - 1, len(rb) - 1
        pairs = sorted(((i, j) for i in range(na + 1) for j in range(nb + 1)), key=lambda ij: (ij[0] + ij[1], ij))
        seen = {(0, 0)}
        for i, j in [(na, nb), (0, nb), (na, 0)] + pairs:
            if (i, j) in seen:
                continue
            seen.add((i, j))
            sub = self._sub(ra[i], rb[j], allowed, d, no_red=True)
            if sub:
                return Proof(technique.value, a, b, (sub,))
        return None

    def _value_premise(self, v: Term, w: Term, avoid) -> Tuple[Term, Term]:
        z = fresh_var(avoid)
        if self.calc.programs:
            k = fresh_ctx_var(avoid)
            return CtxApp(k, App(v, Var(z))), CtxApp(k, App(w, Var(z)))
        return App(v, Var(z)), App(w, Var(z))

    def _subst(self, technique, a, b, allowed, d):
        for pr, leaf in self._subst_sources(a, b, allowed):
            holes = sorted(pr.fresh & (free_vars(pr.lhs) | free_vars(pr.rhs)))
            for x in holes:
                for renaming, v, w in value_hole_matches(a, b, pr, x):
                    if v is None and w is None:
                        continue
                    v = w if v is None else v
                    w = v if w is None else w
                    premise = self._value_premise(v, w, free_names(a, b, v, w))
                    sub = self._sub(*premise, allowed, d)
                    if sub:
                        if leaf is None:
                            leaf = Proof(MEMBER, pr.lhs, pr.rhs, pair=pr.label, renaming=tuple(sorted(renaming.items())))
                        return Proof(technique.value, a, b, (leaf, sub))
        if T.REFL not in allowed:
            return None
        x = fresh_var(free_names(a, b))
        diff = value_difference(a, b, x)
        if diff is None:
            return None
        t, v, w = diff
        premise = self._value_premise(v, w, free_names(a, b))
        sub = self._sub(*premise, allowed, d)
        return Proof(technique.value, a, b, (Proof(T.REFL.value, t, t), sub)) if sub else None

    def _subst_sources(self, a, b, allowed) -> Iterator[Tuple[RelPair, Optional[Proof]]]:
        """Base pairs, then pairs this search has already proved under the
        allowed techniques; in the latter every free variable is a hole."""
        for pr in self.base:
            yield pr, None
        for (t, s, proved_with, _), proof in list(self._proved.items()):
            if not proved_with <= allowed or proof.rule in (MEMBER, T.REFL.value, T.RESULT.value):
                continue
            if type(t) is not type(a) or type(s) is not type(b) or (t, s) == (a, b):
                continue
            if _bare_var(t) or _bare_var(s):
                continue
            yield RelPair(t, s, free_vars(t) | free_vars(s), "proved"), proof

    def _factor(self, technique, a, b, allowed, d, splits_a, splits_b, wrap=lambda t: t):
        """Common shape of the context techniques: a = E[t], b = E'[s] from
        (E[z], E'[z]) and (t, s)."""
        z = fresh_var(free_names(a, b))
        for fa, ta in splits_a:
            for fb, tb in splits_b:
                ctx_goal = (wrap(plug_frames(fa, Var(z))), wrap(plug_frames(fb, Var(z))))
                p1 = self._sub(*ctx_goal, allowed, d)
                if not p1:
                    continue
                p2 = self._sub(ta, tb, allowed, d)
                if p2:
                    return Proof(technique.value, a, b, (p1, p2))
        return None

    def _ectx(self, technique, a, b, allowed, d):
        sa = [s for s in spine_splits(a) if s[0]]
        sb = [s for s in spine_splits(b) if s[0]]
        return self._factor(technique, a, b, allowed, d, sa, sb)

    def _pctx(self, technique, a, b, allowed, d):
        return self._ectx(technique, a, b, allowed, d)

    def _pctxrst(self, technique, a, b, allowed, d):
        """<E[t]> and <E'[s]> from (<E[z]>, <E'[z]>), (t, s) and the empty
        outer contexts (z, z); the last is only implied when refl is allowed."""
        if not (isinstance(a, Reset) and isinstance(b, Reset)):
            return None
        outer = None
        if T.REFL not in allowed:
            z = Var(fresh_var(free_names(a, b)))
            outer = self._sub(z, z, allowed, d)
            if outer is None:
                return None
        sa = list(spine_splits(a.body))
        sb = list(spine_splits(b.body))
        proof = self._factor(technique, a, b, allowed, d, sa, sb, wrap=Reset)
        if proof is None or outer is None:
            return proof
        return Proof(proof.rule, a, b, proof.premises + (outer,))

    def _ectxpure(self, technique, a, b, allowed, d):
        sa = [s for s in spine_splits(a, through_reset=True) if s[0] and _pure(s[1])]
        sb = [s for s in spine_splits(b, through_reset=True) if s[0] and _pure(s[1])]
        return self._factor(technique, a, b, allowed, d, sa, sb)

    def _substc(self, technique, a, b, allowed, d):
        names = free_names(a, b)
        z = fresh_var(names)
        for pr in self.base:
            holes = sorted(pr.fresh & (free_ctx_vars(pr.lhs) | free_ctx_vars(pr.rhs)))
            for k in holes:
                for renaming, f, g in ctx_hole_matches(a, b, pr, k):
                    if f is None and g is None:
                        continue
                    f = g if f is None else f
                    g = f if g is None else g
                    p1 = self._sub(f.plug(Var(z)), g.plug(Var(z)), allowed, d)
                    if p1:
                        leaf = Proof(MEMBER, pr.lhs, pr.rhs, pair=pr.label, renaming=tuple(sorted(renaming.items())))
                        return Proof(technique.value, a, b, (leaf, p1))
        w = fresh_ctx_var(names)
        for fa, ta in program_splits(a):
            for fb, tb in program_splits(b):
                if not fa.frames and not fb.frames:
                    continue
                p1 = self._sub(fa.plug(Var(z)), fb.plug(Var(z)), allowed, d)
                if not p1:
                    continue
                p2 = self._sub(CtxApp(w, ta), CtxApp(w, tb), allowed, d)
                if p2:
                    return Proof(technique.value, a, b, (p1, p2))
        return None
