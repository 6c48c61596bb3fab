"""
Bounded search for a witness relation.

Starting from the single goal pair, the relation is checked as written; each
undischarged obligation contributes its candidate pair and the check is
repeated, until the relation verifies, a mismatch shows up, or the pair
bound is reached.

Usage:
    result = auto_prove(lhs, rhs, CalculusId.LAMBDA, technique_set(CalculusId.LAMBDA))
    if isinstance(result.verdict, Verified):
        print(render_relation(result.relation))
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import List

from .engine import Failed, Inconclusive, Verdict, Verified, verify_bisimulation_up_to
from .matching import match_modulo_fresh
from .relation import Relation, RelPair, make_pair
from .techniques import TechniqueSet
from .terms import CalculusId, Term

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProveResult:
    verdict: Verdict
    relation: Relation
    rounds: int


def auto_prove(
    lhs: Term,
    rhs: Term,
    calc: CalculusId,
    ts: TechniqueSet,
    max_pairs: int = 32,
    fuel: int = 1000,
    depth: int = 6,
) -> ProveResult:
    if max_pairs < 1 or fuel < 1 or depth < 1:
        raise ValueError("max_pairs, fuel and depth must be positive")
    pairs: List[RelPair] = [make_pair(calc, lhs, rhs, label="pair 1")]
    rounds = 0
    while True:
        rounds += 1
        rel = Relation(CalculusId(calc), tuple(pairs))
        verdict = verify_bisimulation_up_to(rel, ts, fuel, depth)
        if not isinstance(verdict, Failed):
            log.info("prove finished after %d rounds with %s", rounds, verdict.label)
            return ProveResult(verdict, rel, rounds)
        cand = verdict.candidate
        if any(match_modulo_fresh(cand.lhs, cand.rhs, pr) is not None for pr in pairs):
            reason = f"saturation stalled on {verdict.pair}: {verdict.reason}"
            return ProveResult(Inconclusive(reason, verdict.pair, verdict.path), rel, rounds)
        if len(pairs) >= max_pairs:
            return ProveResult(Inconclusive(f"pair bound {max_pairs} reached", verdict.pair, verdict.path), rel, rounds)
        log.debug("adding %s", cand.label)
        pairs.append(replace(cand, label=f"pair {len(pairs) + 1}"))
