"""
Minimal s-expression reader shared by relation files and trace files.

Strings are raw: everything between two double quotes, no escapes.
`;` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

GRAMMAR = r"""
    start: expr*

    ?expr: list
         | STRING   -> string
         | SYMBOL   -> symbol

    list: "(" expr* ")"

    STRING: /"[^"]*"/
    SYMBOL: /[^\s()";]+/
    COMMENT: /;[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr")


@dataclass(frozen=True)
class Atom:
    text: str
    quoted: bool
    line: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int

    def head(self) -> str:
        if self.items and isinstance(self.items[0], Atom) and not self.items[0].quoted:
            return self.items[0].text
        return ""


SExpr = Union[Atom, SList]


@v_args(inline=True)
class _Builder(Transformer):
    def start(self, *items):
        return list(items)

    def list(self, *items):
        return SList(tuple(items), items[0].line if items else 0)

    def string(self, tok):
        return Atom(str(tok)[1:-1], True, tok.line)

    def symbol(self, tok):
        return Atom(str(tok), False, tok.line)


def read_sexprs(text: str) -> List[SExpr]:
    """Parse all top-level s-expressions in `text`; raises ValueError with
    the position of the first syntax error."""
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        raise ValueError(f"malformed s-expression at line {e.line}, column {e.column}") from e
    return _Builder().transform(tree)


def quote(s: str) -> str:
    if '"' in s:
        raise ValueError(f"cannot quote a string containing a double quote: {s!r}")
    return f'"{s}"'
