"""Command line: simulate the update/relaxation protocol, analyze states, solve steady states

Exit codes: 0 success, 2 usage or input error, 3 numerical or validation failure.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

from application.services import AnalysisService, SteadyStateService
from domain.entities import LN2, ProtocolConfig, StateAnalysis, WorkLedger
from domain.enums import Ordering, Subsystem
from domain.errors import InputError, NumericalError, ProtocolStepError
from domain.protocol import run_protocol
from domain.states import validate
from domain.value_objects import MeasurementBasis, OptimizerSettings
from infrastructure.config import AppSettings, configure_logging
from infrastructure.csv_export import emit_csv
from infrastructure.repositories.in_memory_repositories import InMemoryStateRepository
from infrastructure.serialization import (
    dump_state, load_channel, load_state_payload, read_channel_file, read_state_file, state_from_payload, write_state_file,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    optimizer = argparse.ArgumentParser(add_help=False)
    optimizer.add_argument("--grid-deg", type=float, help="polar grid step in degrees; the azimuthal step is twice this")
    optimizer.add_argument("--refine-tol", type=float, help="simplex stopping tolerance on the objective (bits)")
    optimizer.add_argument("--beta", type=float, default=1.0, help="inverse temperature")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", "-o", type=str, help="output file (default: standard output)")

    simulate = sub.add_parser("simulate", parents=[optimizer, output], help="run the update/relaxation protocol, write CSV")
    simulate.add_argument("--p", type=float, default=0.7, help="damping probability of the update")
    simulate.add_argument("--kappa", type=float, default=1.0, help="cascade rate")
    simulate.add_argument("--kdt", type=float, default=1.0, help="kappa times the relaxation time per step")
    simulate.add_argument("--steps", type=int, default=10, help="number of update/relaxation steps")

    analyze = sub.add_parser("analyze", parents=[optimizer], help="correlation and work report for a state file")
    analyze.add_argument("state", type=str, help="state JSON file")
    analyze.add_argument("channel", type=str, nargs="?", help="channel JSON file applied to X")

    steady = sub.add_parser("steady-state", parents=[output], help="write the relaxation steady state")
    steady.add_argument("--ordering", choices=[o.name for o in Ordering], default="SX", help="tensor order of the written state")
    steady.add_argument("--kappa", type=float, default=1.0, help="cascade rate")
    steady.add_argument("--periodic", action="store_true", help="fixed point of a full update/relaxation cycle instead")
    steady.add_argument("--p", type=float, default=0.7, help="damping probability (with --periodic)")
    steady.add_argument("--kdt", type=float, default=1.0, help="kappa times the relaxation time (with --periodic)")

    check = sub.add_parser("validate", help="check state or channel files")
    check.add_argument("files", type=str, nargs="+")
    return parser


def optimizer_settings(args: argparse.Namespace, settings: AppSettings) -> OptimizerSettings:
    base = settings.optimizer()
    overrides = {}
    if args.grid_deg is not None:
        overrides.update(theta_step_deg=args.grid_deg, phi_step_deg=2 * args.grid_deg)
    if args.refine_tol is not None:
        overrides["refine_tol"] = args.refine_tol
    return OptimizerSettings(**{**base.model_dump(), **overrides})


def _write(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# ==================== COMMANDS ====================
def cmd_simulate(args: argparse.Namespace, settings: AppSettings, stdout: TextIO) -> int:
    cfg = ProtocolConfig.from_kdt(
        kdt=args.kdt,
        kappa=args.kappa,
        p=args.p,
        n_steps=args.steps,
        beta=args.beta,
        optimizer=optimizer_settings(args, settings),
    )
    logger.info("simulating %d steps with p=%g, kappa*dt=%g", cfg.n_steps, cfg.p, cfg.kdt)
    _write(emit_csv(run_protocol(cfg)), args.out, stdout)
    return EXIT_OK


def _basis(basis: MeasurementBasis) -> str:
    tag = " (computational)" if basis.is_computational() else ""
    return f"theta={basis.theta_deg:.6g} deg, phi={basis.phi_deg:.6g} deg{tag}"


def format_analysis(analysis: StateAnalysis) -> List[str]:
    info = analysis.info
    lines = [
        f"H(SX)         {info.h_joint:.12g}",
        f"H(S)          {info.h_marginal_S:.12g}",
        f"H(X)          {info.h_marginal_X:.12g}",
        f"H(S|X)        {info.h_cond_S_given_X:.12g}",
        f"I(S:X)        {info.mutual_info:.12g}",
    ]
    for result, forward in ((analysis.discord_x, "S|X"), (analysis.discord_s, "X|S")):
        measured = forward[-1]
        lines += [
            f"measured on {measured}:",
            f"  H({forward}^C)   {result.semiclassical_cond_entropy:.12g}",
            f"  I^C({forward})   {result.classical_correlations:.12g}",
            f"  delta({forward}) {result.discord:.12g}",
            f"  basis        {_basis(result.argmin_basis)}",
        ]
    lines += [
        "minimal decoherence loss on X:",
        f"  W            {analysis.min_decoherence_work:.12g}",
        f"  beta W/ln2   {analysis.min_decoherence_bits:.12g}",
        f"  basis        {_basis(analysis.min_decoherence_basis)}",
    ]
    return lines


def format_ledger(ledger: WorkLedger) -> List[str]:
    forward = "S|X" if ledger.side is Subsystem.X else "X|S"
    bits = ledger.beta / LN2
    return [
        f"work ledger, measured on {ledger.side.value} (W, beta W/ln2):",
        f"  W_ext before {ledger.w_ext_before:.12g}  {ledger.w_ext_before * bits:.12g}",
        f"  W_ext after  {ledger.w_ext_after:.12g}  {ledger.w_ext_after * bits:.12g}",
        f"  W_lost       {ledger.w_lost:.12g}  {ledger.w_lost_bits:.12g}",
        f"  W_C({forward})    {ledger.w_lost_classical:.12g}  {ledger.w_lost_classical_bits:.12g}",
        f"  W_Q({forward})    {ledger.w_lost_quantum:.12g}  {ledger.w_lost_quantum_bits:.12g}",
    ]


def cmd_analyze(args: argparse.Namespace, settings: AppSettings, stdout: TextIO) -> int:
    state = read_state_file(args.state)
    service = AnalysisService(InMemoryStateRepository(), settings=optimizer_settings(args, settings))
    lines = [f"state {args.state}, beta={args.beta:g}"] + format_analysis(service.analyze(state, args.beta))
    if args.channel:
        channel = read_channel_file(args.channel)
        lines.append(f"channel {args.channel} ({channel.label}) applied to X")
        for side in (Subsystem.X, Subsystem.S):
            lines += format_ledger(service.ledger(state, channel, args.beta, side))
    stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_steady_state(args: argparse.Namespace, settings: AppSettings, stdout: TextIO) -> int:
    service = SteadyStateService()
    ordering = Ordering[args.ordering]
    if args.periodic:
        cfg = ProtocolConfig.from_kdt(kdt=args.kdt, kappa=args.kappa, p=args.p, ordering=ordering)
        state = service.periodic_steady_state(cfg)
    else:
        state = service.steady_state(args.kappa, ordering)
    if args.out:
        write_state_file(state, args.out)
    else:
        stdout.write(dump_state(state))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, settings: AppSettings, stdout: TextIO) -> int:
    """Reports every file; exit 3 when any state fails validation"""
    failed = False
    for path in args.files:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            is_channel = "operators" in json.loads(text)
        except (json.JSONDecodeError, TypeError) as exc:
            raise InputError(f"{path}: not a JSON document ({exc})") from exc
        if is_channel:
            channel = load_channel(text)
            stdout.write(f"{path}: ok (channel, {len(channel.operators)} Kraus operators, dim {channel.dim})\n")
            continue
        report = validate(state_from_payload(load_state_payload(text), validate=False))
        if report.ok:
            stdout.write(f"{path}: ok (state, trace {report.trace:.12g}, min eigenvalue {report.min_eigenvalue:.3e})\n")
        else:
            failed = True
            violations = ", ".join(f"{v.invariant} ({v.magnitude:.3e})" for v in report.violations)
            stdout.write(f"{path}: INVALID {violations}\n")
    return EXIT_NUMERICAL if failed else EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "steady-state": cmd_steady_state,
    "validate": cmd_validate,
}


def main(argv: Optional[List[str]] = None, stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = AppSettings.from_env()
    except ValueError as exc:
        stderr.write(f"error: bad environment settings: {exc}\n")
        return EXIT_INPUT
    level = ["WARNING", "INFO", "DEBUG"][min(args.verbose, 2)] if args.verbose else settings.log_level
    configure_logging(level)

    try:
        return COMMANDS[args.command](args, settings, stdout)
    except ProtocolStepError as exc:
        stderr.write(f"error: step {exc.step}: {exc.cause}\n")
        return EXIT_NUMERICAL
    except NumericalError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except (InputError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
