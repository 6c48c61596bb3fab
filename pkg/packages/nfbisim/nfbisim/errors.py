from __future__ import annotations
from typing import Optional


class NfbisimError(Exception):
    """Base class for every error the workbench raises on bad input."""


class TermSyntaxError(NfbisimError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" at line {line}, column {column}" if line is not None and line > 0 else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class CalculusError(NfbisimError, ValueError):
    pass


class RelationFileError(NfbisimError, ValueError):
    pass


class TechniqueError(NfbisimError, ValueError):
    pass


class ManifestError(NfbisimError, ValueError):
    pass


class TraceError(NfbisimError, ValueError):
    """A trace file does not replay against the reduction semantics."""
