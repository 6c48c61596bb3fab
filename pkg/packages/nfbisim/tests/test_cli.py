"""
Command line and settings: exit codes and output. No network.
Run: pytest -q
"""

import pytest

from nfbisim.cli import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main
from nfbisim.engine import Verified, verify_bisimulation_up_to
from nfbisim.relation import load_relation
from nfbisim.settings import CORPUS, Settings, load_settings
from nfbisim.techniques import technique_set
from nfbisim.terms import CalculusId

REL = str(CORPUS / "unsound.rel")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ----------------------------- eval / replay -----------------------------

def test_eval_prints_steps_and_normal_form(capsys):
    code, out, _ = run(capsys, "eval", "-c", "shiftreset", "<S S>")
    assert code == EXIT_OK
    assert "reset-value" in out and out.rstrip().endswith(r"value: \x. <x>")


def test_eval_trace_replays(capsys, tmp_path):
    code, out, _ = run(capsys, "eval", "-c", "callcc", "k[K K]", "--format", "trace")
    assert code == EXIT_OK and out.startswith("(trace (calculus callcc)")
    path = tmp_path / "kk.trace"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run(capsys, "replay", str(path))
    assert code == EXIT_OK and "4 steps" in out


def test_eval_lifts_bare_callcc_terms(capsys):
    code, out, _ = run(capsys, "eval", "-c", "callcc", r"(\x. x) y")
    assert code == EXIT_OK
    assert "#k0[" in out


def test_eval_out_of_fuel(capsys):
    code, out, _ = run(capsys, "eval", "-c", "lambda", r"(\x. x x) (\x. x x)", "--fuel", "5")
    assert code == EXIT_INCONCLUSIVE
    assert "fuel exhausted after 5 steps" in out


# ----------------------------- verify ------------------------------------

def test_verify_wadsworth(capsys):
    code, out, _ = run(capsys, "verify", str(CORPUS / "wadsworth.rel"), "-t", "refl,red", "-v")
    assert code == EXIT_OK
    assert out.startswith("VERIFIED (3 pairs)\n")
    assert "red(" in out and "expanded" not in out


def test_verify_counts_expanded_pairs(capsys):
    brief = str(CORPUS / "wadsworth_brief.rel")
    code, out, _ = run(capsys, "verify", brief, "-t", "refl,red")
    assert code == EXIT_FAILED and out.startswith("FAILED pair 2")
    code, out, _ = run(capsys, "verify", brief, "-t", "refl,red", "--expand")
    assert code == EXIT_OK
    assert out.startswith("VERIFIED (2 pairs, 1 added by expansion)")


def test_verify_unsound_relation_fails_as_written(capsys):
    code, out, _ = run(capsys, "verify", REL)
    assert code == EXIT_FAILED and out.startswith("FAILED pair 1")
    assert "candidate pair" in out


def test_verify_expanded_unsound_relation_mismatches(capsys):
    code, out, _ = run(capsys, "verify", REL, "--expand")
    assert code == EXIT_FAILED and out.startswith("NOT-BISIMILAR")
    assert "mismatch:" in out


def test_verify_unsafe_is_flagged(capsys):
    code, out, _ = run(capsys, "verify", REL, "--unsafe", "strong+=ectx")
    assert code == EXIT_OK
    assert out.startswith("UNSAFE-VERIFIED") and "not a proof" in out


# ----------------------------- prove / distinguish -----------------------

def test_prove_writes_witness(capsys, tmp_path):
    target = tmp_path / "eta.rel"
    code, out, _ = run(capsys, "prove", "-c", "lambda", r"\x. x", r"\x. \y. x y", "-o", str(target))
    assert code == EXIT_OK and "Witness ->" in out
    rel = load_relation(target)
    assert isinstance(verify_bisimulation_up_to(rel, technique_set(CalculusId.LAMBDA)), Verified)


def test_prove_prints_witness(capsys):
    code, out, _ = run(capsys, "prove", "-c", "lambda", r"\x. x", r"\x. \y. x y")
    assert code == EXIT_OK and "(relation (calculus lambda)" in out


def test_distinguish_exit_codes(capsys):
    assert run(capsys, "distinguish", "-c", "lambda", "y", "z")[0] == EXIT_FAILED
    code, out, _ = run(capsys, "distinguish", "-c", "lambda", r"\x. x", r"\x. \y. x y", "--depth", "4")
    assert code == EXIT_INCONCLUSIVE and out.startswith("INCONCLUSIVE")


def test_callcc_program_sides_stay_as_written(capsys):
    code, out, _ = run(capsys, "prove", "-c", "callcc", "k[y]", "A(k[y])")
    assert code == EXIT_OK and "k[y]" in out
    code, out, _ = run(capsys, "distinguish", "-c", "callcc", "y", "k[y]")
    assert code == EXIT_FAILED and out.startswith("NOT-BISIMILAR")


def test_corpus_filter(capsys):
    code, out, _ = run(capsys, "corpus", "--filter", "traces")
    assert code == EXIT_OK and "6/6 passed" in out
    code, _, err = run(capsys, "corpus", "--filter", "no-such-entry")
    assert code == EXIT_USAGE and "no corpus entries" in err


# ----------------------------- usage errors ------------------------------

@pytest.mark.parametrize(
    "argv",
    [
        ["verify", REL, "-t", "refl,pctx"],
        ["verify", REL, "--unsafe", "strong=ectx"],
        ["verify", "no/such/file.rel"],
        ["verify", REL, "--fuel", "0"],
        ["verify", REL, "--depth", "0"],
        ["eval", "-c", "lambda", "(y"],
        ["eval", "-c", "lambda", "S"],
        ["prove", "-c", "lambda", "y", "y", "--max-pairs", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


@pytest.mark.parametrize(
    "argv", [[], ["frobnicate"], ["eval", "y"], ["eval", "-c", "kappa", "y"], ["verify", REL, "--strict"]]
)
def test_argument_errors_exit_with_usage_code(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == EXIT_USAGE


# ----------------------------- settings ----------------------------------

def test_settings_defaults(monkeypatch):
    for name in ("NFBISIM_FUEL", "NFBISIM_DEPTH", "NFBISIM_MAX_PAIRS", "NFBISIM_WORKERS", "NFBISIM_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    assert load_settings() == Settings()


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("NFBISIM_FUEL", "77")
    monkeypatch.setenv("NFBISIM_WORKERS", "3")
    monkeypatch.setenv("NFBISIM_LOG_LEVEL", "debug")
    s = load_settings()
    assert (s.fuel, s.workers, s.log_level) == (77, 3, "DEBUG")
    assert s.log_level_value == 10


@pytest.mark.parametrize(
    "name,value",
    [
        ("NFBISIM_FUEL", "lots"),
        ("NFBISIM_FUEL", "0"),
        ("NFBISIM_WORKERS", "0"),
        ("NFBISIM_LOG_LEVEL", "chatty"),
        ("NFBISIM_DEPTH", "0"),
        ("NFBISIM_DEPTH", "-1"),
    ],
)
def test_bad_settings(monkeypatch, capsys, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError) as e:
        load_settings()
    assert name in str(e.value)
    assert main(["corpus"]) == EXIT_USAGE


def test_environment_fuel_is_the_default(monkeypatch, capsys):
    monkeypatch.setenv("NFBISIM_FUEL", "5")
    code, out, _ = run(capsys, "eval", "-c", "lambda", r"(\x. x x) (\x. x x)")
    assert code == EXIT_INCONCLUSIVE and "after 5 steps" in out
