"""
The example corpus: relation files plus a manifest of expected outcomes.

    entries = load_manifest()
    report = run_corpus("axioms")
    print(report.render())
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .calculi import get_calculus
from .engine import Verified, verify_bisimulation_up_to
from .grammar import parse_term, print_term
from .settings import CORPUS, SCHEMAS
from .prove import auto_prove
from .relation import load_relation, make_pair
from .semantics import Evaluated
from .techniques import technique_set
from .terms import CalculusId
from .unroll import distinguish
from .validators.manifest_validate import load_schema, parse_and_validate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntryResult:
    name: str
    expected: str
    got: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class CorpusReport:
    results: List[EntryResult]
    seconds: float

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def render(self) -> str:
        lines = []
        for r in self.results:
            mark = "ok  " if r.ok else "FAIL"
            line = f"{mark} {r.name:<32} {r.got:<16} {r.seconds:6.2f}s"
            if not r.ok:
                line += f"  expected {r.expected}"
                if r.detail:
                    line += f": {r.detail}"
            lines.append(line)
        passed = sum(r.ok for r in self.results)
        lines.append(f"{passed}/{len(self.results)} passed in {self.seconds:.2f}s")
        return "\n".join(lines) + "\n"


def load_manifest(corpus_dir: Path = CORPUS) -> List[dict]:
    raw = (corpus_dir / "manifest.json").read_text(encoding="utf-8")
    schema = load_schema(SCHEMAS / "corpus_schema.json")
    return parse_and_validate(raw, schema, corpus_dir)["entries"]


def selected(entry: dict, pattern: Optional[str]) -> bool:
    if not pattern:
        return True
    return pattern in entry.get("tags", ()) or pattern in entry["name"] or pattern == entry["calculus"]


def _verdict_name(verdict) -> str:
    if isinstance(verdict, Verified) and verdict.unsafe:
        return "unsafe-verified"
    return verdict.kind


def _run_eval(entry: dict, calc: CalculusId, fuel: int) -> tuple:
    term = parse_term(entry["term"], calc)
    result = get_calculus(calc).evaluate(term, entry.get("fuel", fuel), record=True)
    if not isinstance(result, Evaluated):
        return "exhausted", ""
    got = result.normal.kind
    problems = []
    if "steps" in entry and result.steps != entry["steps"]:
        problems.append(f"{result.steps} steps, expected {entry['steps']}")
    if "rules" in entry and [s.rule for s in result.trace] != entry["rules"]:
        problems.append("rules " + ",".join(s.rule for s in result.trace))
    if "result" in entry and result.normal.term != parse_term(entry["result"], calc):
        problems.append(f"result {print_term(result.normal.term)}")
    if problems:
        return f"{got} (differs)", "; ".join(problems)
    return got, ""


def run_entry(entry: dict, corpus_dir: Path = CORPUS, fuel: int = 1000, depth: int = 6, max_pairs: int = 32) -> EntryResult:
    calc = CalculusId(entry["calculus"])
    fuel = entry.get("fuel", fuel)
    depth = entry.get("depth", depth)
    started = time.perf_counter()
    detail = ""
    command = entry["command"]
    if command == "eval":
        got, detail = _run_eval(entry, calc, fuel)
    else:
        ts = technique_set(calc, entry.get("techniques"), entry.get("unsafe", ()))
        if command == "verify":
            rel = load_relation(corpus_dir / entry["relation"])
            verdict = verify_bisimulation_up_to(rel, ts, fuel, depth, expand=entry.get("expand", False))
        elif command == "prove":
            lhs, rhs = parse_term(entry["lhs"], calc), parse_term(entry["rhs"], calc)
            verdict = auto_prove(lhs, rhs, calc, ts, max_pairs, fuel, depth).verdict
        else:
            lhs, rhs = parse_term(entry["lhs"], calc), parse_term(entry["rhs"], calc)
            verdict = distinguish(make_pair(calc, lhs, rhs, label="goal"), calc, depth, fuel)
        got = _verdict_name(verdict)
        detail = getattr(verdict, "reason", "")
    seconds = time.perf_counter() - started
    log.info("%s: %s in %.2fs", entry["name"], got, seconds)
    return EntryResult(entry["name"], entry["expect"], got, got == entry["expect"], detail, seconds)


def run_corpus(
    pattern: Optional[str] = None,
    corpus_dir: Path = CORPUS,
    fuel: int = 1000,
    depth: int = 6,
    max_pairs: int = 32,
    workers: int = 1,
) -> CorpusReport:
    started = time.perf_counter()
    entries = [e for e in load_manifest(corpus_dir) if selected(e, pattern)]

    def one(entry: dict) -> EntryResult:
        return run_entry(entry, corpus_dir, fuel, depth, max_pairs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, entries))
    else:
        results = [one(e) for e in entries]
    return CorpusReport(results, time.perf_counter() - started)
