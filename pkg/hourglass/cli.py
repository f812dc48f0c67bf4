"""
Command-line interface.

    python -m hourglass SUBCOMMAND SCENARIO [ARGS] [FLAGS]

=== SUBCOMMANDS ===

check SCENARIO                      validate; evaluate bundled claims if any
entails SCENARIO S1 S2|FORMULA      S1 ⊢ S2 (or S1 ⊢ FORMULA)
weaker SCENARIO S1 S2               S1 weaker than S2
images SCENARIO SPEC                pre and post images with witnesses
lattice SCENARIO                    weakness lattice (DOT by default)
verify SCENARIO [--lemmas]          hourglass theorem check
sufficient SCENARIO SPEC            N ⊆ post(SPEC)
minimal SCENARIO SPEC [--closure]   minimal sufficiency
generic SCENARIO SPEC --epsilon E   ε-genericness [--closure] [--reading]
tradeoff SCENARIO                   tradeoff table (CSV by default)
report SCENARIO                     full JSON report

SCENARIO is a path to a .hgl file or the name of a bundled scenario.

=== EXIT CODES ===

0   success / verdict true
1   verdict false, violations found, or a claim that does not hold
2   usage, parse or validation error (message on stderr)
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from hourglass import reports
from hourglass.claims import check_claims
from hourglass.errors import HourglassError
from hourglass.images import Analysis
from hourglass.logic import Theory, parse_formula
from hourglass.scenario import load_scenario
from hourglass.scenario_loader import ScenarioLoader
from hourglass.settings import AnalysisSettings
from hourglass.sufficiency import (
    CandidateSpace,
    GenericnessQuery,
    generic,
    minimality_evidence,
    sufficiency_evidence,
    tradeoff_table,
)
from hourglass.universe import Universe

logger = logging.getLogger(__name__)

FORMATS = ("text", "json", "dot", "csv")

# Result of a subcommand: (output text, exit code)
Outcome = Tuple[str, int]


def _verdict(value: bool) -> Outcome:
    return ("true\n" if value else "false\n"), (0 if value else 1)


def resolve_scenario(argument: str, settings: AnalysisSettings) -> Universe:
    """A .hgl path on disk, or else the name of a bundled scenario."""
    path = Path(argument)
    if path.is_file():
        return load_scenario(path, settings)
    bundled = ScenarioLoader.get_scenario(argument)
    if bundled is None:
        raise HourglassError(f"scenario not found: {argument}")
    logger.debug("using bundled scenario %s", bundled.name)
    return bundled.universe


def _format(args, allowed: Tuple[str, ...], default: str) -> str:
    chosen = args.format or default
    if chosen not in allowed:
        raise HourglassError(f"'{args.command}' does not support --format {chosen}")
    return chosen


# === HANDLERS ===

def cmd_check(args, u: Universe, analysis: Analysis) -> Outcome:
    lines = [
        f"{u.name}: {len(u.vocab)} atoms, {len(u.specs)} specs, "
        f"{len(u.programs)} programs, {len(u.necessary)} necessary"
    ]
    # claims only apply to the bundled universe they were written for
    bundled = ScenarioLoader.get_scenario(u.name)
    claims = ScenarioLoader.claims_for(u.name) if bundled and bundled.universe == u else []
    results = check_claims(u, claims, analysis=analysis)
    for result in results:
        status = "holds" if result.holds else "FAILS"
        lines.append(f"  {status}: {result.claim.describe()}")
    failed = sum(not r.holds for r in results)
    if results:
        lines.append(f"{len(results) - failed}/{len(results)} claims hold")
    return "\n".join(lines) + "\n", 1 if failed else 0


def cmd_entails(args, u: Universe, analysis: Analysis) -> Outcome:
    premises = u.spec(args.premises).theory
    if u.has_spec(args.conclusion):
        conclusions = u.spec(args.conclusion).theory
    else:
        conclusions = Theory.of(parse_formula(args.conclusion, u.vocab))
    return _verdict(analysis.checker.theory_entails(premises, conclusions))


def cmd_weaker(args, u: Universe, analysis: Analysis) -> Outcome:
    return _verdict(analysis.weaker_than(args.spec1, args.spec2))


def cmd_images(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("text", "json", "dot"), "text")
    if fmt == "dot":
        return reports.hourglass_dot(analysis, u.spec(args.spec).name), 0
    pre = analysis.pre_image(args.spec)
    post = analysis.post_image(args.spec)
    if fmt == "json":
        payload = [m.model_dump(mode="json", exclude_none=True) for m in (pre, post)]
        return json.dumps(payload, indent=2) + "\n", 0
    return reports.image_text(pre) + reports.image_text(post), 0


def cmd_lattice(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("dot", "json", "text"), "dot")
    if fmt == "dot":
        return reports.lattice_dot(analysis), 0
    report = reports.lattice_report(analysis)
    if fmt == "json":
        return reports.to_json(report), 0
    return reports.lattice_text(report), 0


def cmd_verify(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("text", "json"), "text")
    result = analysis.verify_hourglass(lemmas=args.lemmas)
    text = reports.to_json(result) if fmt == "json" else reports.verification_text(result)
    return text, 0 if result.ok else 1


def cmd_sufficient(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("text", "json"), "text")
    evidence = sufficiency_evidence(u, args.spec, analysis=analysis)
    text = reports.to_json(evidence) if fmt == "json" else reports.sufficiency_text(evidence)
    return text, 0 if evidence.sufficient else 1


def cmd_minimal(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("text", "json"), "text")
    space = CandidateSpace.CLOSURE if args.closure else CandidateSpace.DECLARED
    evidence = minimality_evidence(u, args.spec, analysis=analysis, space=space)
    text = reports.to_json(evidence) if fmt == "json" else reports.minimality_text(evidence)
    return text, 0 if evidence.minimal else 1


def cmd_generic(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("text", "json"), "text")
    query = GenericnessQuery(
        subject=u.spec(args.spec).name,
        epsilon=args.epsilon,
        candidate_space=CandidateSpace.CLOSURE if args.closure else CandidateSpace.DECLARED,
    )
    verdict = generic(u, query, analysis=analysis, reading=args.reading)
    text = reports.to_json(verdict) if fmt == "json" else reports.generic_text(verdict)
    return text, 0 if verdict.generic else 1


def cmd_tradeoff(args, u: Universe, analysis: Analysis) -> Outcome:
    fmt = _format(args, ("csv", "json", "text"), "csv")
    rows = tradeoff_table(u, analysis=analysis)
    if fmt == "csv":
        return reports.tradeoff_csv(rows), 0
    if fmt == "json":
        return json.dumps([r.model_dump(mode="json") for r in rows], indent=2) + "\n", 0
    return reports.tradeoff_text(rows), 0


def cmd_report(args, u: Universe, analysis: Analysis) -> Outcome:
    _format(args, ("json",), "json")
    return reports.to_json(reports.build_report(u, lemmas=args.lemmas, analysis=analysis)), 0


COMMANDS: Dict[str, Callable[..., Outcome]] = {
    "check": cmd_check,
    "entails": cmd_entails,
    "weaker": cmd_weaker,
    "images": cmd_images,
    "lattice": cmd_lattice,
    "verify": cmd_verify,
    "sufficient": cmd_sufficient,
    "minimal": cmd_minimal,
    "generic": cmd_generic,
    "tradeoff": cmd_tradeoff,
    "report": cmd_report,
}


# === PARSER ===

def _nonnegative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help="output format")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument(
        "--engine",
        choices=("truth-table", "dpll"),
        default="truth-table",
        help="entailment procedure (default: truth-table)",
    )
    common.add_argument("--full-witnesses", action="store_true", help="list every witness program")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="hourglass",
        description="Analyse layered specifications: weakness, images, sufficiency, genericness.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name: str, help_text: str, *positionals: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("scenario", help=".hgl file or bundled scenario name")
        for positional in positionals:
            p.add_argument(positional)
        return p

    add("check", "validate a scenario and evaluate its claims")
    add("entails", "does S1 entail S2 (spec or formula)", "premises", "conclusion")
    add("weaker", "is S1 weaker than S2", "spec1", "spec2")
    add("images", "pre and post images of a spec", "spec")
    add("lattice", "weakness lattice")
    add("verify", "check the hourglass theorem").add_argument(
        "--lemmas", action="store_true", help="also check both monotonicity lemmas"
    )
    add("sufficient", "is SPEC sufficient for the necessary set", "spec")
    add("minimal", "is SPEC minimally sufficient", "spec").add_argument(
        "--closure", action="store_true", help="also quantify over conjunction-of-atoms specs"
    )
    generic_parser = add("generic", "is SPEC generic for the necessary set", "spec")
    generic_parser.add_argument("--epsilon", type=_nonnegative, required=True, help="required value loss")
    generic_parser.add_argument(
        "--closure", action="store_true", help="also quantify over conjunction-of-atoms specs"
    )
    generic_parser.add_argument(
        "--reading",
        choices=("loss", "literal"),
        default="loss",
        help="value condition on strict weakenings (default: loss)",
    )
    add("tradeoff", "tradeoff table")
    add("report", "full analysis report as JSON").add_argument(
        "--lemmas", action="store_true", help="include the lemma check in the verification"
    )
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger("hourglass").setLevel(logging.DEBUG if verbose else logging.WARNING)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    _configure_logging(args.verbose)
    try:
        settings = AnalysisSettings(engine=args.engine, full_witnesses=args.full_witnesses)
        universe = resolve_scenario(args.scenario, settings)
        analysis = Analysis(universe, settings)
        text, code = COMMANDS[args.command](args, universe, analysis)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except (HourglassError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    logger.debug("%s exited with %d", args.command, code)
    return code
