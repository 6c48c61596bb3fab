"""
Checking that a candidate relation is a normal-form bisimulation up to a
set of techniques.

For every pair the fresh names are instantiated with generator names and
both sides are evaluated. When both sides take a step, the pair may be
settled by relating the two reducts in the full closure (the reduction
clause is active). Otherwise the normal forms are compared clause by
clause: passive obligations must lie in the closure under strong
techniques only, active ones in the closure under the full set.

An obligation outside the closure fails the check. With `expand` it is
instead added to the relation as the pair of its normal forms and checked
in turn, nested at most `depth` times; the verdict then counts the pairs
so added.

Usage:
    verdict = verify_bisimulation_up_to(rel, technique_set(rel.calculus, "refl,red"))
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .calculi import Calculus, get_calculus
from .closure import ClosureSearch, Proof
from .relation import Relation, RelPair
from .semantics import Clause, Evaluated, FuelExhausted, Mismatch, Obligation
from .techniques import Technique, TechniqueSet, default_strong
from .terms import Term, free_ctx_vars, free_names, fresh_ctx_var, fresh_var, rename

log = logging.getLogger(__name__)


# ----------------------------- reports and verdicts ----------------------

@dataclass(frozen=True)
class Discharge:
    obligation: Obligation
    proof: Optional[Proof] = None
    expansion: Optional["PairReport"] = None


@dataclass(frozen=True)
class PairReport:
    label: str
    lhs: Term
    rhs: Term
    lhs_steps: int
    rhs_steps: int
    clause: str
    discharges: Tuple[Discharge, ...] = ()


@dataclass(frozen=True)
class Evidence:
    """Goal pairs from an instantiated relation pair down to the one whose
    normal forms mismatch; each goal is an obligation of the previous one."""
    root: str
    goals: Tuple[Tuple[Term, Term], ...]
    mismatch: Optional[Mismatch] = None
    diverging: Optional[str] = None


@dataclass(frozen=True)
class Verified:
    reports: Tuple[PairReport, ...]
    unsafe: bool = False
    kind = "verified"

    @property
    def label(self) -> str:
        return "UNSAFE-VERIFIED" if self.unsafe else "VERIFIED"

    @property
    def expanded(self) -> int:
        """Pairs added to the relation by obligation expansion."""
        return sum(1 for _, d in iter_discharges(self.reports) if d.expansion is not None)


@dataclass(frozen=True)
class Failed:
    pair: str
    obligation: Obligation
    reason: str
    path: Tuple[Tuple[Term, Term], ...] = ()
    candidate: Optional[RelPair] = None
    kind = "failed"
    label = "FAILED"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    pair: str = ""
    path: Tuple[Tuple[Term, Term], ...] = ()
    kind = "inconclusive"
    label = "INCONCLUSIVE"


@dataclass(frozen=True)
class NotBisimilar:
    evidence: Evidence
    kind = "not-bisimilar"
    label = "NOT-BISIMILAR"


Verdict = Union[Verified, Failed, Inconclusive, NotBisimilar]

_PRECEDENCE = {NotBisimilar: 3, Failed: 2, Inconclusive: 1}


def worst(verdicts: Sequence[Verdict]) -> Optional[Verdict]:
    """The first verdict of the highest-precedence failing kind, if any."""
    failing = [v for v in verdicts if not isinstance(v, Verified)]
    if not failing:
        return None
    top = max(_PRECEDENCE[type(v)] for v in failing)
    return next(v for v in failing if _PRECEDENCE[type(v)] == top)


# ----------------------------- instantiation -----------------------------

def instantiate_pair(pr: RelPair) -> Tuple[Term, Term, frozenset]:
    """Rename the fresh names of `pr` to generator names unused in `pr`."""
    taken = set(pr.names())
    ctx_names = free_ctx_vars(pr.lhs) | free_ctx_vars(pr.rhs)
    mapping: Dict[str, str] = {}
    for name in sorted(pr.fresh):
        new = fresh_ctx_var(taken) if name in ctx_names else fresh_var(taken)
        mapping[name] = new
        taken.add(new)
    return rename(pr.lhs, mapping), rename(pr.rhs, mapping), frozenset(mapping.values())


# ----------------------------- the check ---------------------------------

class _Outcome(Exception):
    """Carries a non-verified verdict out of a nested pair check."""

    def __init__(self, verdict: Verdict):
        super().__init__(verdict.label)
        self.verdict = verdict


class Verifier:
    def __init__(
        self,
        relation: Relation,
        ts: TechniqueSet,
        fuel: int = 1000,
        depth: int = 6,
        expand: bool = False,
        divergence_is_distinct: bool = False,
        workers: int = 1,
    ):
        if fuel < 0 or depth < 0:
            raise ValueError("fuel and depth must be non-negative")
        self.relation = relation
        self.calc: Calculus = get_calculus(relation.calculus)
        self.ts = ts
        self.fuel = fuel
        self.depth = depth
        self.expand = expand
        self.divergence_is_distinct = divergence_is_distinct
        self.workers = max(1, workers)

    def run(self) -> Verdict:
        pairs = self.relation.pairs
        if self.workers > 1 and len(pairs) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                verdicts = list(pool.map(self.check_root, pairs))
        else:
            verdicts = [self.check_root(pr) for pr in pairs]
        bad = worst(verdicts)
        if bad is not None:
            return bad
        reports = tuple(r for v in verdicts for r in v.reports)
        return Verified(reports, unsafe=self.ts.unsafe)

    def check_root(self, pr: RelPair) -> Verdict:
        lhs, rhs, fresh = instantiate_pair(pr)
        log.debug("checking %s", pr.label)
        hyps: List[RelPair] = []
        try:
            report = self._check(pr.label, lhs, rhs, fresh, hyps, 0, ((lhs, rhs),))
        except _Outcome as out:
            return out.verdict
        return Verified((report,), unsafe=self.ts.unsafe)

    def _evaluate(self, label: str, t: Term, s: Term, path) -> Tuple[Evaluated, Evaluated]:
        ea = self.calc.evaluate(t, self.fuel)
        eb = self.calc.evaluate(s, self.fuel)
        exhausted = [side for side, r in (("lhs", ea), ("rhs", eb)) if isinstance(r, FuelExhausted)]
        if not exhausted:
            return ea, eb
        log.debug("%s: fuel exhausted on %s", label, ",".join(exhausted))
        if self.divergence_is_distinct and len(exhausted) == 1:
            raise _Outcome(NotBisimilar(Evidence(label, path, diverging=exhausted[0])))
        raise _Outcome(Inconclusive(f"fuel exhausted ({self.fuel} steps) on {' and '.join(exhausted)}", label, path))

    def _check(self, label: str, lhs: Term, rhs: Term, fresh: frozenset, hyps: List[RelPair], level: int, path) -> PairReport:
        ea, eb = self._evaluate(label, lhs, rhs, path)
        search = ClosureSearch(self.calc, self.relation.pairs + tuple(hyps), self.fuel)
        a, b = ea.normal, eb.normal

        if ea.steps > 0 and eb.steps > 0:
            ob = Obligation(Clause.ACTIVE, a.term, b.term, frozenset(), "reduction")
            proof = search.member(a.term, b.term, self.ts.full, self.depth)
            if proof is not None:
                return PairReport(label, lhs, rhs, ea.steps, eb.steps, "reduction", (Discharge(ob, proof),))

        obs = self.calc.obligations(a, b, free_names(lhs, rhs))
        if isinstance(obs, Mismatch):
            raise _Outcome(NotBisimilar(Evidence(label, path, obs)))

        discharges: List[Discharge] = []
        for ob in obs:
            allowed = self.ts.strong if ob.kind is Clause.PASSIVE else self.ts.full
            proof = search.member(ob.lhs, ob.rhs, allowed, self.depth)
            if proof is not None:
                discharges.append(Discharge(ob, proof))
                continue
            discharges.append(self._expand(label, ob, allowed, fresh, hyps, level, path))
            search = ClosureSearch(self.calc, self.relation.pairs + tuple(hyps), self.fuel)
        return PairReport(label, lhs, rhs, ea.steps, eb.steps, "normal-form", tuple(discharges))

    def _expand(self, label, ob: Obligation, allowed, fresh, hyps: List[RelPair], level: int, path) -> Discharge:
        sub_path = path + ((ob.lhs, ob.rhs),)
        candidate = self._candidate(label, ob, allowed, fresh, sub_path)
        if not self.expand:
            raise _Outcome(Failed(label, ob, f"{ob.kind.value} {ob.label} obligation is not in the closure", sub_path, candidate))
        if level >= self.depth:
            raise _Outcome(Inconclusive(f"expansion depth {self.depth} exhausted", label, sub_path))
        log.debug("%s: expanding %s %s obligation", label, ob.kind.value, ob.label)
        hyps.append(candidate)
        report = self._check(candidate.label, candidate.lhs, candidate.rhs, candidate.fresh, hyps, level + 1, sub_path)
        return Discharge(ob, None, report)

    def _candidate(self, label, ob: Obligation, allowed, fresh, path) -> RelPair:
        """The pair an undischarged obligation adds to the relation: its
        normal forms when reduction may be used to reach them."""
        lhs, rhs = ob.lhs, ob.rhs
        if Technique.RED in allowed:
            ea, eb = self._evaluate(label, ob.lhs, ob.rhs, path)
            lhs, rhs = ea.normal.term, eb.normal.term
        names = free_names(lhs, rhs)
        return RelPair(lhs, rhs, (ob.fresh | fresh) & names, f"{label}/{ob.label}")


def verify_bisimulation_up_to(
    relation: Relation,
    ts: TechniqueSet,
    fuel: int = 1000,
    depth: int = 6,
    expand: bool = False,
    divergence_is_distinct: bool = False,
    workers: int = 1,
) -> Verdict:
    return Verifier(relation, ts, fuel, depth, expand, divergence_is_distinct, workers).run()


def progress_check_pair(
    pr: RelPair,
    relation: Relation,
    ts: TechniqueSet,
    fuel: int = 1000,
    depth: int = 6,
    expand: bool = False,
) -> Verdict:
    """Check the bisimulation clauses for one pair of `relation`."""
    return Verifier(relation, ts, fuel, depth, expand).check_root(pr)


# ----------------------------- audits ------------------------------------

def iter_discharges(reports: Sequence[PairReport]):
    stack = list(reports)
    while stack:
        r = stack.pop()
        for d in r.discharges:
            yield r, d
            if d.expansion is not None:
                stack.append(d.expansion)


def passive_violations(verdict: Verified, calculus) -> List[Discharge]:
    """Passive obligations whose proof uses a technique outside the
    calculus's default strong set."""
    strong = default_strong(calculus)
    return [
        d
        for _, d in iter_discharges(verdict.reports)
        if d.obligation.kind is Clause.PASSIVE and d.proof is not None and not d.proof.techniques() <= strong
    ]


def replay_evidence(calculus, evidence: Evidence, fuel: int = 1000) -> bool:
    """Re-derive a distinguishing path: each goal must be an obligation of
    the previous goal's normal forms, and the last goal must mismatch (or
    diverge on exactly one side)."""
    calc = get_calculus(calculus)
    goals = list(evidence.goals)
    for (t, s), nxt in zip(goals, goals[1:]):
        ea, eb = calc.evaluate(t, fuel), calc.evaluate(s, fuel)
        if not (isinstance(ea, Evaluated) and isinstance(eb, Evaluated)):
            return False
        obs = calc.obligations(ea.normal, eb.normal, free_names(t, s))
        if isinstance(obs, Mismatch) or all((o.lhs, o.rhs) != nxt for o in obs):
            return False
    t, s = goals[-1]
    ea, eb = calc.evaluate(t, fuel), calc.evaluate(s, fuel)
    if evidence.diverging is not None:
        return isinstance(ea, FuelExhausted) != isinstance(eb, FuelExhausted)
    if not (isinstance(ea, Evaluated) and isinstance(eb, Evaluated)):
        return False
    return isinstance(calc.obligations(ea.normal, eb.normal, free_names(t, s)), Mismatch)
