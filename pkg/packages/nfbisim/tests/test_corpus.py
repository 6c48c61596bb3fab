"""
Manifest validation and the corpus runner. No network.
Run: pytest -q
"""

import json
import logging

import pytest

from nfbisim.corpus import load_manifest, run_corpus, run_entry, selected
from nfbisim.errors import ManifestError
from nfbisim.settings import CORPUS, SCHEMAS
from nfbisim.validators.manifest_validate import load_schema, parse_and_validate

SCHEMA = load_schema(SCHEMAS / "corpus_schema.json")

ENTRY = {"name": "one", "command": "distinguish", "calculus": "lambda", "lhs": "y", "rhs": "z", "expect": "not-bisimilar"}


def validate(*entries):
    return parse_and_validate(json.dumps({"entries": list(entries)}), SCHEMA, CORPUS)


def test_shipped_manifest_is_valid():
    entries = load_manifest()
    assert len(entries) == 23
    assert {e["calculus"] for e in entries} == {"lambda", "shiftreset", "callcc"}


def test_valid_minimal_manifest():
    assert validate(ENTRY)["entries"][0]["name"] == "one"


@pytest.mark.parametrize(
    "change,message",
    [
        ({"command": "run"}, "Schema validation failed"),
        ({"colour": "red"}, "Schema validation failed"),
        ({"expect": "value"}, "expect a verdict"),
        ({"command": "eval", "expect": "verified", "term": "y"}, "normal-form kind"),
        ({"command": "prove", "lhs": None}, "requires lhs"),
        ({"command": "verify", "relation": "missing.rel"}, "not found"),
        ({"techniques": "refl,pctx"}, "does not apply"),
        ({"unsafe": ["weak+=refl"]}, "unsupported --unsafe"),
    ],
)
def test_bad_entries_rejected(change, message):
    entry = {**ENTRY, **change}
    entry = {k: v for k, v in entry.items() if v is not None}
    with pytest.raises(ManifestError) as e:
        validate(entry)
    assert message in str(e.value)


def test_duplicate_names_rejected():
    with pytest.raises(ManifestError) as e:
        validate(ENTRY, ENTRY)
    assert "duplicate" in str(e.value)


def test_invalid_json_rejected():
    with pytest.raises(ManifestError) as e:
        parse_and_validate("{entries: ", SCHEMA, CORPUS)
    assert "Invalid JSON" in str(e.value)


def test_selection_by_tag_name_or_calculus():
    entry = {"name": "c-tail", "calculus": "callcc", "tags": ["axioms"]}
    assert selected(entry, None)
    assert selected(entry, "axioms") and selected(entry, "tail") and selected(entry, "callcc")
    assert not selected(entry, "lambda")


def test_eval_entry_checks_trace_details():
    entry = {
        "name": "beta",
        "command": "eval",
        "calculus": "lambda",
        "term": r"(\x. x) (\y. y)",
        "steps": 2,
        "expect": "value",
    }
    r = run_entry(entry)
    assert not r.ok and "1 steps" in r.detail
    r = run_entry({**entry, "steps": 1})
    assert r.ok and r.got == "value"


def test_traces_and_axioms_run_clean():
    report = run_corpus("traces")
    assert len(report.results) == 6 and report.ok
    report = run_corpus("axioms")
    assert len(report.results) == 3 and report.ok, report.render()


def test_discipline_entries():
    report = run_corpus("discipline")
    got = {r.name: r.got for r in report.results}
    assert got == {
        "unsound-context": "failed",
        "unsound-context-expanded": "not-bisimilar",
        "unsound-context-unsafe": "unsafe-verified",
    }
    assert "passed" in report.render().splitlines()[-1]


def test_whole_corpus_with_workers():
    report = run_corpus(workers=2)
    assert len(report.results) == 23
    assert report.ok, report.render()


def test_expansion_entries():
    report = run_corpus("expansion")
    assert {r.name for r in report.results} == {"wadsworth-expanded", "wadsworth-fixpoints-expanded"}
    assert report.ok, report.render()


def test_unsafe_warning_is_logged_once(caplog):
    with caplog.at_level(logging.WARNING, logger="nfbisim"):
        report = run_corpus("unsound-context-unsafe")
    assert [r.got for r in report.results] == ["unsafe-verified"]
    assert len([r for r in caplog.records if "UNSAFE" in r.getMessage()]) == 1
