from __future__ import annotations
import json
from pathlib import Path
from jsonschema import Draft7Validator

from ..errors import ManifestError, TechniqueError
from ..techniques import parse_techniques, parse_unsafe
from ..terms import CalculusId

EVAL_KINDS = {"value", "open-stuck", "control-stuck", "context-stuck", "exhausted"}
VERDICTS = {"verified", "unsafe-verified", "failed", "inconclusive", "not-bisimilar"}

# fields each command needs besides the common ones
REQUIRED = {
    "eval": ("term",),
    "verify": ("relation",),
    "prove": ("lhs", "rhs"),
    "distinguish": ("lhs", "rhs"),
}

def load_schema(schema_path: Path) -> dict:
    with schema_path.open("r", encoding="utf-8") as f:
        return json.load(f)

def parse_and_validate(raw_text: str, schema: dict, corpus_dir: Path) -> dict:
    s = raw_text.strip()
    try:
        data = json.loads(s)
    except json.JSONDecodeError as e:
        raise ManifestError(f"Invalid JSON: {e.msg} at pos {e.pos}") from e

    # Schema validation
    validator = Draft7Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.path))
    if errors:
        msgs = []
        for e in errors:
            path = "/".join(map(str, e.path)) or "(root)"
            msgs.append(f"{path}: {e.message}")
        raise ManifestError("Schema validation failed: " + " | ".join(msgs))

    seen = set()
    for i, entry in enumerate(data["entries"]):
        where = f"entries[{i}] ({entry['name']})"
        if entry["name"] in seen:
            raise ManifestError(f"{where}: duplicate name")
        seen.add(entry["name"])

        command = entry["command"]
        missing = [k for k in REQUIRED[command] if k not in entry]
        if missing:
            raise ManifestError(f"{where}: command {command} requires {', '.join(missing)}")

        # Expected outcome must fit the command
        expect = entry["expect"]
        if command == "eval" and expect not in EVAL_KINDS:
            raise ManifestError(f"{where}: eval entries expect a normal-form kind, got {expect}")
        if command != "eval" and expect not in VERDICTS:
            raise ManifestError(f"{where}: {command} entries expect a verdict, got {expect}")

        if "relation" in entry and not (corpus_dir / entry["relation"]).is_file():
            raise ManifestError(f"{where}: relation file {entry['relation']} not found")

        calc = CalculusId(entry["calculus"])
        try:
            if "techniques" in entry:
                parse_techniques(entry["techniques"], calc)
            parse_unsafe(entry.get("unsafe", ()), calc)
        except TechniqueError as e:
            raise ManifestError(f"{where}: {e}") from e

    return data
