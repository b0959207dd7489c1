"""Command line surface: ``python -m app {eval,gate,cosmetic,verify}``.

Exit codes: 0 Certified or Verified, 1 Refuted or Counterexample,
2 Inconclusive or DepthExceeded, 3 numeric error, 4 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import DrillfillError, UsageError
from app.core.logging import configure_logging
from app.models import CliConfig, GateReport, GateStatus
from app.services import gates, slopes, special, verify
from app.services.interval import Interval, ProofStatus

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3
EXIT_USAGE = 4

_GATE_EXIT = {
    GateStatus.CERTIFIED: EXIT_OK,
    GateStatus.REFUTED: EXIT_REFUTED,
    GateStatus.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{message}\nusage: {self.format_usage().strip()}")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps values given before the subcommand
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Print JSON")
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS, help="Significant digits shown")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS, help="Prover bisection depth")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="Prover thread pool size")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="drillfill", parents=[common], allow_abbrev=False, description=__doc__)
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    evaluate = commands.add_parser("eval", parents=[common], allow_abbrev=False, help="Evaluate a function")
    evaluate.add_argument("function")
    evaluate.add_argument("args", nargs="*")

    gate = commands.add_parser(
        "gate", parents=[common], allow_abbrev=False, help="Check a theorem's hypotheses; extra --key value pairs"
    )
    gate.add_argument("gate_id")

    cosmetic = commands.add_parser("cosmetic", parents=[common], allow_abbrev=False, help="List cosmetic candidates")
    cosmetic.add_argument("cusp_file")
    cosmetic.add_argument("--sys")
    cosmetic.add_argument("--vol")
    cosmetic.add_argument("--V", dest="V")
    cosmetic.add_argument("--knot", action="store_true")

    run = commands.add_parser("verify", parents=[common], allow_abbrev=False, help="Run verification tasks")
    which = run.add_mutually_exclusive_group(required=True)
    which.add_argument("--task", action="append", dest="tasks")
    which.add_argument("--all", action="store_true")
    run.add_argument("--margin-tighten", "--tighten", dest="tighten", action="store_true")
    run.add_argument("--force", action="store_true", help="Ignore cached ledger entries")
    return parser


def gate_params(extra: Sequence[str]) -> Dict[str, str]:
    """``["--delta", "0.5", "--ell=0.01"]`` to ``{"delta": "0.5", "ell": "0.01"}``."""
    params: Dict[str, str] = {}
    items = list(extra)
    index = 0
    while index < len(items):
        token = items[index]
        if not token.startswith("--"):
            raise UsageError(f"unexpected argument {token!r}; gate parameters look like --name value")
        if "=" in token:
            key, value = token[2:].split("=", 1)
            index += 1
        else:
            if index + 1 >= len(items):
                raise UsageError(f"parameter {token} needs a value")
            key, value = token[2:], items[index + 1]
            index += 2
        params[key.replace("-", "_")] = value
    return params


def _config(args: argparse.Namespace) -> CliConfig:
    overrides = {}
    if getattr(args, "json", False):
        overrides["output"] = "json"
    for name, field in (("digits", "precision_digits"), ("depth", "depth"), ("workers", "workers")):
        if hasattr(args, name):
            overrides[field] = getattr(args, name)
    try:
        return CliConfig(**overrides)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc


def _emit(payload: dict, config: CliConfig, human: List[str], out: TextIO) -> None:
    if config.output == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(human) + "\n")


def _fmt(pair, digits: int) -> str:
    lo, hi = pair
    return Interval(lo, hi).format(digits)


def cmd_eval(args: argparse.Namespace, config: CliConfig, out: TextIO) -> int:
    spec, values = special.evaluate(args.function, args.args)
    payload = {
        "function": spec.name,
        "values": {name: value.to_list() for name, value in values.items()},
        "citation": spec.citation,
    }
    human = [f"{name} = {value.format(config.precision_digits)}" for name, value in values.items()]
    human.append(f"citation: {spec.citation}")
    _emit(payload, config, human, out)
    return EXIT_OK


def render_report(report: GateReport, digits: int) -> List[str]:
    lines = [f"gate {report.gate_id}: {report.status.value}", f"citation: {report.citation}"]
    if report.failed:
        lines.append(f"failed hypothesis: {report.failed}")
    width = max((len(name) for name in report.quantities), default=0)
    for name, pair in report.quantities.items():
        lines.append(f"  {name.ljust(width)}  {_fmt(pair, digits)}")
    lines.extend(f"note: {note}" for note in report.notes)
    return lines


def cmd_gate(args: argparse.Namespace, extra: Sequence[str], config: CliConfig, out: TextIO) -> int:
    report = gates.run_gate(args.gate_id, gate_params(extra))
    _emit(report.model_dump(mode="json"), config, render_report(report, config.precision_digits), out)
    return _GATE_EXIT[report.status]


def cmd_cosmetic(args: argparse.Namespace, config: CliConfig, out: TextIO) -> int:
    data = slopes.parse_cusp_file(args.cusp_file)
    sys_value = Interval.parse(args.sys) if args.sys else data.sys
    vol = Interval.parse(args.vol) if args.vol else data.vol
    V = Interval.parse(args.V) if args.V else data.V
    for name, value in (("sys", sys_value), ("vol", vol), ("V", V)):
        if value is None:
            raise UsageError(f"--{name} is required when the cusp file does not give it")
    if len(data.cusps) > 1:
        logger.warning("cosmetic search uses the first of %d cusps", len(data.cusps))
    candidates = slopes.cosmetic_candidates(data.cusps[0], sys_value, vol, V)
    payload = slopes.cosmetic_payload(candidates, args.knot)
    digits = config.precision_digits
    human = [
        f"S1 cutoff (normalized): {candidates.s1.cutoff.format(digits)}  |S1| = {len(candidates.s1)}",
        f"S2 cutoff (euclidean):  {candidates.s2.cutoff.format(digits)}  |S2| = {len(candidates.s2)}",
        f"pairs: {len(candidates.pairs)}",
    ]
    if candidates.s1.boundary or candidates.s2.boundary:
        straddling = ", ".join(str(s) for s in candidates.s1.boundary + candidates.s2.boundary)
        human.append(f"straddling cutoff: {straddling}")
    shown = candidates.knot_filtered() if args.knot else candidates.pairs
    if args.knot:
        human.append(f"knot pairs (p | q^2 + 1): {len(shown)}")
    for pair in shown:
        human.append(
            f"  {str(pair.first):>8} {str(pair.second):>8}  "
            f"{pair.first_length.format(6)}  {pair.second_length.format(6)}"
        )
    _emit(payload, config, human, out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: CliConfig, out: TextIO) -> int:
    task_ids = None if args.all else args.tasks
    entries = verify.run_all(
        task_ids,
        tighten=args.tighten,
        workers=config.workers,
        max_depth=config.depth,
        force=args.force,
    )
    payload = {"tasks": [entry.model_dump() for entry in entries]}
    width = max(len(entry.task_id) for entry in entries)
    human = [f"{'task'.ljust(width)}  {'status':<14} {'boxes':>9} {'depth':>5} {'seconds':>9}"]
    for entry in entries:
        human.append(
            f"{entry.task_id.ljust(width)}  {entry.status:<14} {entry.boxes:>9} {entry.max_depth:>5} {entry.seconds:>9.2f}"
        )
    _emit(payload, config, human, out)
    statuses = {entry.status for entry in entries}
    if ProofStatus.COUNTEREXAMPLE.value in statuses:
        return EXIT_REFUTED
    if ProofStatus.DEPTH_EXCEEDED.value in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    configure_logging(settings.log_level)
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra and args.command != "gate":
            raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
        config = _config(args)
        if args.command == "eval":
            return cmd_eval(args, config, out)
        if args.command == "gate":
            return cmd_gate(args, extra, config, out)
        if args.command == "cosmetic":
            return cmd_cosmetic(args, config, out)
        return cmd_verify(args, config, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except DrillfillError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        logger.exception("Unexpected failure")
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
