"""
Unrolling the bisimulation clauses with no up-to reasoning at all.

Starting from concrete pairs, every obligation becomes a new concrete pair
(its fresh names are already generator names unused in the goal) and is
explored breadth-first. A kind, head or context-variable mismatch anywhere
shows the pair is not bisimilar; reaching the depth bound shows nothing.

`distinguish` is the command built on it; `unroll` is also the oracle the
tests run against every verified relation.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Set, Tuple

from .calculi import get_calculus
from .engine import Evidence, Inconclusive, NotBisimilar, instantiate_pair
from .relation import Relation, RelPair
from .semantics import Evaluated, Mismatch
from .terms import CalculusId, Term, free_names

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Unrolled:
    evidence: Optional[Evidence]
    explored: int
    exhausted: int
    cut: int


def unroll(
    calculus: CalculusId,
    roots: Iterable[Tuple[str, Term, Term]],
    depth: int,
    fuel: int = 1000,
) -> Unrolled:
    """Breadth-first expansion of labelled root goals; `depth` bounds the
    number of obligation levels below a root."""
    calc = get_calculus(calculus)
    queue = deque((label, ((lhs, rhs),)) for label, lhs, rhs in roots)
    seen: Set[Tuple[Term, Term]] = set()
    explored = exhausted = cut = 0
    while queue:
        label, path = queue.popleft()
        t, s = path[-1]
        if t == s or (t, s) in seen:
            continue
        seen.add((t, s))
        explored += 1
        ea, eb = calc.evaluate(t, fuel), calc.evaluate(s, fuel)
        if not (isinstance(ea, Evaluated) and isinstance(eb, Evaluated)):
            exhausted += 1
            continue
        obs = calc.obligations(ea.normal, eb.normal, free_names(t, s))
        if isinstance(obs, Mismatch):
            log.debug("%s: mismatch after %d levels: %s", label, len(path) - 1, obs.reason)
            return Unrolled(Evidence(label, path, obs), explored, exhausted, cut)
        for ob in obs:
            if len(path) > depth:
                cut += 1
                continue
            queue.append((label, path + ((ob.lhs, ob.rhs),)))
    return Unrolled(None, explored, exhausted, cut)


def unroll_relation(rel: Relation, depth: int, fuel: int = 1000) -> Unrolled:
    roots = []
    for pr in rel.pairs:
        lhs, rhs, _ = instantiate_pair(pr)
        roots.append((pr.label, lhs, rhs))
    return unroll(rel.calculus, roots, depth, fuel)


def distinguish(pair: RelPair, calculus: CalculusId, depth: int, fuel: int = 1000):
    """NotBisimilar with a distinguishing path, or Inconclusive."""
    result = unroll(calculus, [(pair.label or "goal", pair.lhs, pair.rhs)], depth, fuel)
    if result.evidence is not None:
        return NotBisimilar(result.evidence)
    reason = f"no mismatch within depth {depth} ({result.explored} pairs explored"
    if result.exhausted:
        reason += f", {result.exhausted} out of fuel"
    return Inconclusive(reason + ")", pair.label)
