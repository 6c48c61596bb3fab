import argparse
import logging
import sys
from pathlib import Path

from .calc_callcc import lift
from .calculi import get_calculus
from .corpus import run_corpus
from .engine import Failed, Inconclusive, NotBisimilar, Verified, verify_bisimulation_up_to
from .errors import NfbisimError
from .grammar import parse_term
from .prove import auto_prove
from .relation import load_relation, make_pair
from .semantics import Evaluated
from .render import render_verdict, render_witness
from .settings import load_settings
from .techniques import technique_set
from .terms import CalculusId, CtxApp, free_names
from .trace import render_text, render_trace, replay_trace
from .unroll import distinguish

EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def exit_code(verdict) -> int:
    if isinstance(verdict, Verified):
        return EXIT_OK
    if isinstance(verdict, (Failed, NotBisimilar)):
        return EXIT_FAILED
    if isinstance(verdict, Inconclusive):
        return EXIT_INCONCLUSIVE
    raise TypeError(f"Unexpected verdict: {verdict!r}")


def build_parser(settings) -> argparse.ArgumentParser:
    ap = _Parser(prog="nfbisim", description="Normal-form bisimulation workbench")
    ap.add_argument("--verbose", "-v", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def bounds(p, depth=True):
        p.add_argument("--fuel", type=int, default=settings.fuel)
        if depth:
            p.add_argument("--depth", type=int, default=settings.depth)

    def calculus(p):
        p.add_argument("--calculus", "-c", required=True, choices=[c.value for c in CalculusId])

    p = sub.add_parser("eval", help="reduce a term and classify its normal form")
    calculus(p)
    p.add_argument("term")
    p.add_argument("--format", choices=["text", "trace"], default="text")
    bounds(p, depth=False)

    p = sub.add_parser("replay", help="re-run a trace written by `eval --format trace`")
    p.add_argument("trace_file", type=Path)

    p = sub.add_parser("verify", help="check a relation file")
    p.add_argument("relation_file", type=Path)
    p.add_argument("--techniques", "-t")
    p.add_argument("--unsafe", action="append", default=[], metavar="strong+=LIST")
    p.add_argument("--expand", action="store_true", help="add undischarged obligations to the relation and check them in turn")
    p.add_argument("--divergence-is-distinct", action="store_true")
    bounds(p)

    p = sub.add_parser("prove", help="search for a witness relation")
    calculus(p)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--techniques", "-t")
    p.add_argument("--unsafe", action="append", default=[], metavar="strong+=LIST")
    p.add_argument("--max-pairs", type=int, default=settings.max_pairs)
    p.add_argument("--output", "-o", type=Path, help="write the witness relation here")
    bounds(p)

    p = sub.add_parser("distinguish", help="look for a distinguishing obligation path")
    calculus(p)
    p.add_argument("lhs")
    p.add_argument("rhs")
    bounds(p)

    p = sub.add_parser("corpus", help="run the example corpus")
    p.add_argument("--filter")
    bounds(p)
    p.add_argument("--max-pairs", type=int, default=settings.max_pairs)
    return ap


def cmd_eval(args) -> int:
    calc = CalculusId(args.calculus)
    term = parse_term(args.term, calc)
    if calc is CalculusId.CALLCC_ABORT and not isinstance(term, CtxApp):
        term = lift(term, free_names(term))
    result = get_calculus(calc).evaluate(term, args.fuel, record=True)
    if args.format == "trace":
        print(render_trace(calc, term, result), end="")
    else:
        print(render_text(term, result), end="")
    return EXIT_OK if isinstance(result, Evaluated) else EXIT_INCONCLUSIVE


def cmd_replay(args) -> int:
    doc = replay_trace(args.trace_file.read_text(encoding="utf-8"))
    print(f"trace replays: {len(doc.steps)} steps")
    return EXIT_OK


def cmd_verify(args) -> int:
    rel = load_relation(args.relation_file)
    ts = technique_set(rel.calculus, args.techniques, args.unsafe)
    verdict = verify_bisimulation_up_to(
        rel,
        ts,
        args.fuel,
        args.depth,
        expand=args.expand,
        divergence_is_distinct=args.divergence_is_distinct,
        workers=args.workers,
    )
    print(render_verdict(verdict, args.verbose), end="")
    return exit_code(verdict)


def cmd_prove(args) -> int:
    calc = CalculusId(args.calculus)
    lhs, rhs = parse_term(args.lhs, calc), parse_term(args.rhs, calc)
    ts = technique_set(calc, args.techniques, args.unsafe)
    result = auto_prove(lhs, rhs, calc, ts, args.max_pairs, args.fuel, args.depth)
    print(render_verdict(result.verdict, args.verbose), end="")
    if isinstance(result.verdict, Verified):
        witness = render_witness(result.relation, result.verdict)
        if args.output:
            args.output.write_text(witness, encoding="utf-8")
            print(f"Witness -> {args.output}")
        else:
            print(witness, end="")
    return exit_code(result.verdict)


def cmd_distinguish(args) -> int:
    calc = CalculusId(args.calculus)
    lhs, rhs = parse_term(args.lhs, calc), parse_term(args.rhs, calc)
    verdict = distinguish(make_pair(calc, lhs, rhs, label="goal"), calc, args.depth, args.fuel)
    print(render_verdict(verdict, args.verbose), end="")
    return exit_code(verdict)


def cmd_corpus(args) -> int:
    report = run_corpus(args.filter, fuel=args.fuel, depth=args.depth, max_pairs=args.max_pairs, workers=args.workers)
    print(report.render(), end="")
    if not report.results:
        print(f"no corpus entries match {args.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report.ok else EXIT_FAILED


COMMANDS = {
    "eval": cmd_eval,
    "replay": cmd_replay,
    "verify": cmd_verify,
    "prove": cmd_prove,
    "distinguish": cmd_distinguish,
    "corpus": cmd_corpus,
}


def main(argv=None) -> int:
    try:
        settings = load_settings()
    except ValueError as e:
        print(f"nfbisim: {e}", file=sys.stderr)
        return EXIT_USAGE
    args = build_parser(settings).parse_args(argv)
    args.workers = settings.workers
    for name in ("fuel", "depth", "max_pairs"):
        if getattr(args, name, 1) < 1:
            print(f"nfbisim: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level_value,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (NfbisimError, OSError) as e:
        print(f"nfbisim {args.command} failed: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
