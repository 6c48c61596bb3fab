"""
Candidate relations and the relation file format.

    ; comment
    (relation (calculus lambda)
      (pair "\\x. x" "\\x. (\\z x. x (\\y. z z x y)) (\\z x. x (\\y. z z x y)) (\\f x y. x (f y)) x")
      (pair (fresh y) "y" "\\x. y (J x)"))

A pair stands for all its instances under injective renamings of its
fresh names to names unused elsewhere. In the call/cc calculus a pair of
terms is stored as a pair of programs inside one fresh context variable.

Usage:
    rel = load_relation(Path("corpus/wadsworth.rel"))
    print(render_relation(rel))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .calculi import get_calculus
from .errors import NfbisimError, RelationFileError
from .grammar import parse_term, print_term
from .sexpr import Atom, SList, quote, read_sexprs
from .terms import (
    CalculusId,
    Term,
    check_calculus,
    free_ctx_vars,
    free_names,
    is_generated,
    rename,
)


@dataclass(frozen=True)
class RelPair:
    lhs: Term
    rhs: Term
    fresh: FrozenSet[str] = field(default_factory=frozenset)
    label: str = ""

    def names(self) -> FrozenSet[str]:
        return free_names(self.lhs, self.rhs)

    def fixed(self) -> FrozenSet[str]:
        return self.names() - self.fresh


@dataclass(frozen=True)
class Relation:
    calculus: CalculusId
    pairs: Tuple[RelPair, ...]


def make_pair(calc: CalculusId, lhs: Term, rhs: Term, fresh: Iterable[str] = (), label: str = "") -> RelPair:
    """Validate a pair and lift it to programs where the calculus needs it."""
    fresh = tuple(fresh)
    if len(set(fresh)) != len(fresh):
        raise RelationFileError(f"{label or 'pair'}: duplicate fresh names {fresh}")
    for t in (lhs, rhs):
        check_calculus(t, calc)
    unknown = set(fresh) - free_names(lhs, rhs)
    if unknown:
        raise RelationFileError(f"{label or 'pair'}: fresh names {sorted(unknown)} do not occur in the pair")
    lifted_lhs, lifted_rhs = get_calculus(calc).lift_pair(lhs, rhs)
    added = free_names(lifted_lhs, lifted_rhs) - free_names(lhs, rhs)
    return RelPair(lifted_lhs, lifted_rhs, frozenset(fresh) | added, label)


def _expect_list(x, head: str) -> SList:
    if not isinstance(x, SList) or x.head() != head:
        line = getattr(x, "line", 0)
        raise RelationFileError(f"expected ({head} ...) at line {line}")
    return x


def parse_relation(text: str, allow_generated: bool = False) -> Relation:
    try:
        forms = read_sexprs(text)
    except ValueError as e:
        raise RelationFileError(str(e)) from e
    if len(forms) != 1:
        raise RelationFileError(f"expected exactly one (relation ...) form, found {len(forms)}")
    top = _expect_list(forms[0], "relation")
    if len(top.items) < 2:
        raise RelationFileError("missing (calculus ...) clause")
    calc_form = _expect_list(top.items[1], "calculus")
    if len(calc_form.items) != 2 or not isinstance(calc_form.items[1], Atom):
        raise RelationFileError(f"malformed calculus clause at line {calc_form.line}")
    try:
        calc = CalculusId(calc_form.items[1].text)
    except ValueError as e:
        raise RelationFileError(f"unknown calculus {calc_form.items[1].text!r}") from e

    pairs: List[RelPair] = []
    for i, form in enumerate(top.items[2:], start=1):
        p = _expect_list(form, "pair")
        rest = list(p.items[1:])
        fresh: Tuple[str, ...] = ()
        if rest and isinstance(rest[0], SList):
            fresh_form = _expect_list(rest.pop(0), "fresh")
            fresh = tuple(a.text for a in fresh_form.items[1:] if isinstance(a, Atom))
        if len(rest) != 2 or not all(isinstance(a, Atom) and a.quoted for a in rest):
            raise RelationFileError(f"pair {i} at line {p.line}: expected two quoted terms")
        try:
            lhs = parse_term(rest[0].text, calc, allow_generated)
            rhs = parse_term(rest[1].text, calc, allow_generated)
            pairs.append(make_pair(calc, lhs, rhs, fresh, label=f"pair {i}"))
        except RelationFileError:
            raise
        except NfbisimError as e:
            raise RelationFileError(f"pair {i} at line {p.line}: {e}") from e
    return Relation(calc, tuple(pairs))


def load_relation(path: Path, allow_generated: bool = False) -> Relation:
    return parse_relation(Path(path).read_text(encoding="utf-8"), allow_generated)


def readable_names(pair: RelPair) -> Dict[str, str]:
    """Map generator names of `pair` to user names (x0, x1, .. / k0, k1, ..)
    not already used in the pair."""
    taken = set(pair.names())
    ctx_names = free_ctx_vars(pair.lhs) | free_ctx_vars(pair.rhs)
    mapping: Dict[str, str] = {}
    for name in sorted(n for n in pair.names() if is_generated(n)):
        base = "k" if name in ctx_names else "x"
        i = 0
        while f"{base}{i}" in taken:
            i += 1
        mapping[name] = f"{base}{i}"
        taken.add(mapping[name])
    return mapping


def readable_pair(pair: RelPair) -> RelPair:
    m = readable_names(pair)
    return RelPair(
        rename(pair.lhs, m),
        rename(pair.rhs, m),
        frozenset(m.get(n, n) for n in pair.fresh),
        pair.label,
    )


def render_relation(rel: Relation, readable: bool = True) -> str:
    lines = [f"(relation (calculus {rel.calculus.value})"]
    for pair in rel.pairs:
        if readable:
            pair = readable_pair(pair)
        fresh = f"(fresh {' '.join(sorted(pair.fresh))}) " if pair.fresh else ""
        lhs = print_term(pair.lhs, readable=readable)
        rhs = print_term(pair.rhs, readable=readable)
        lines.append(f"  (pair {fresh}{quote(lhs)} {quote(rhs)})")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"
