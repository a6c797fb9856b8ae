import argparse
import sys
from pathlib import Path

from app.audit.models import BaselineDeltaBudget, UnionDenominator
from app.cli import commands
from app.common.errors import EXIT_INPUT
from app.config import config
from app.files.scores import ScoreFormat
from app.stats.models import BoundKind


class AuditArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors, so they exit 1 rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from e


def _add_audit_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--beta", type=float, default=config.default_beta, help="Total confidence budget."
    )
    p.add_argument("--gamma", type=float, default=0.0, help="Generator relaxation (c, gamma).")
    p.add_argument("--delta", type=float, default=0.0, help="Target relaxation (eps, delta).")
    p.add_argument("--bound", choices=[k.value for k in BoundKind], default=BoundKind.EXACT.value)
    p.add_argument(
        "--no-union-bound",
        dest="union_bound",
        action="store_false",
        help="Test every threshold at beta/2 instead of splitting the budget.",
    )
    p.add_argument(
        "--union-denominator",
        choices=[d.value for d in UnionDenominator],
        default=UnionDenominator.TESTS.value,
        help="Split beta over the thresholds tested, or over the audit size.",
    )
    p.add_argument(
        "--baseline-delta-budget",
        choices=[b.value for b in BaselineDeltaBudget],
        default=BaselineDeltaBudget.GAMMA.value,
        help="Failure mean used by the baseline test when delta > 0.",
    )
    p.add_argument("--recall-min", type=float, default=0.0)
    p.add_argument("--recall-max", type=float, default=1.0)
    p.add_argument("--param-cap", type=float, default=config.default_param_cap)


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="Result document path (default: stdout).")
    p.add_argument("--log-level", help="Override the configured log level.")


def build_parser() -> argparse.ArgumentParser:
    p = AuditArgumentParser(
        prog="privacy-audit",
        description="Retraining-free privacy leakage measurement from membership scores.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    audit = sub.add_parser("audit", help="Measure c_lb, {c+eps}_lb and eps_tilde from score files.")
    source = audit.add_mutually_exclusive_group(required=True)
    source.add_argument("--baseline", type=Path, help="Baseline score file.")
    source.add_argument(
        "--real-nonmembers",
        action="store_true",
        help="Non-members are held-out real data: fix c_lb at 0 and skip the baseline.",
    )
    audit.add_argument("--mia", type=Path, required=True, help="MIA score file.")
    audit.add_argument(
        "--format", choices=[f.value for f in ScoreFormat], help="Score file format."
    )
    _add_audit_options(audit)
    audit.add_argument("--plot", type=Path, help="Directory for precision-recall and bound SVGs.")
    _add_output_options(audit)
    audit.set_defaults(handler=commands.run_audit)

    aggregate = sub.add_parser(
        "aggregate", help="Mean and spread of audit documents from independent runs."
    )
    aggregate.add_argument("--results", type=Path, nargs="+", required=True)
    _add_output_options(aggregate)
    aggregate.set_defaults(handler=commands.run_aggregate)

    o1 = sub.add_parser("o1", help="Two-threshold abstention auditor on target-model losses.")
    o1.add_argument("--scores", type=Path, required=True, help="Loss score file.")
    o1.add_argument("--format", choices=[f.value for f in ScoreFormat], help="Score file format.")
    o1.add_argument("--grid", type=int, default=config.o1_grid_size, help="Quantile grid size.")
    o1.add_argument("--beta", type=float, default=config.default_beta)
    o1.add_argument("--param-cap", type=float, default=config.default_param_cap)
    _add_output_options(o1)
    o1.set_defaults(handler=commands.run_o1)

    simulate = sub.add_parser("simulate", help="Run the audit on synthetic categorical worlds.")
    simulate.add_argument("--preset", choices=["default", "custom"], default="default")
    simulate.add_argument("--world-seed", type=int, default=0, help="Seed of the default world.")
    simulate.add_argument("--p-data", type=float_list, help="Data symbol probabilities.")
    simulate.add_argument("--p-gen", type=float_list, help="Generator symbol probabilities.")
    simulate.add_argument("--loss-separation", type=float)
    simulate.add_argument("--loss-noise", type=float)
    simulate.add_argument("--mia-weight", type=float)
    simulate.add_argument("--m", type=int, help="Audit size.")
    simulate.add_argument("--trials", type=int, default=500, help="Soundness trials.")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--sweep", type=float_list, help='Loss separations, e.g. "0,0.5,1,2".')
    simulate.add_argument("--sweep-trials", type=int, default=20)
    simulate.add_argument(
        "--relaxations", type=float_list, help='Generator relaxations, e.g. "0,1e-5,1e-4,1e-3".'
    )
    _add_audit_options(simulate)
    _add_output_options(simulate)
    simulate.set_defaults(handler=commands.run_simulate)

    validate = sub.add_parser(
        "validate-bounds", help="Check the tails and solvers against oracles."
    )
    validate.add_argument("--trials", type=int, default=500)
    validate.add_argument("--seed", type=int, default=0)
    _add_output_options(validate)
    validate.set_defaults(handler=commands.run_validate_bounds)

    return p
