"""One handler per sub-command. Each returns the finished result document."""

import argparse
from logging import getLogger

from app.audit.aggregate import aggregate_results
from app.audit.engine import bound_curve, measure, relaxation_table
from app.audit.models import AuditConfig, AuditMode
from app.common.errors import ConfigurationError, InputError
from app.files.plots import write_curve_plots
from app.files.results import ResultDocument, ResultKind, load_result
from app.files.scores import ScoreFile, ScoreFormat, load_scores
from app.o1.auditor import o1_measure
from app.oracles.suite import run_validation_suite
from app.simulator.harness import leakage_sweep, validity_trials
from app.simulator.models import CategoricalWorld, SimulationReport
from app.simulator.worlds import default_world, make_world_sample, true_c

logger = getLogger(__name__)


def audit_config_from_args(args: argparse.Namespace) -> AuditConfig:
    return AuditConfig(
        beta=args.beta,
        gamma=args.gamma,
        delta=args.delta,
        bound_kind=args.bound,
        union_bound=args.union_bound,
        union_denominator=args.union_denominator,
        baseline_delta_budget=args.baseline_delta_budget,
        recall_min=args.recall_min,
        recall_max=args.recall_max,
        param_cap=args.param_cap,
    )


def _score_file(path, format_name) -> ScoreFile:
    return ScoreFile.from_path(path, ScoreFormat(format_name) if format_name else None)


def run_audit(args: argparse.Namespace) -> ResultDocument:
    audit_config = audit_config_from_args(args)
    baseline = None
    if not args.real_nonmembers:
        baseline = load_scores(_score_file(args.baseline, args.format))
    mia = load_scores(_score_file(args.mia, args.format))
    result = measure(baseline, mia, audit_config)

    if args.plot:
        curves = {}
        if baseline is not None:
            curves[AuditMode.BASELINE.value] = bound_curve(
                baseline, audit_config, AuditMode.BASELINE
            )
        curves[AuditMode.MIA.value] = bound_curve(mia, result.config_echo, AuditMode.MIA)
        write_curve_plots(curves, result, args.plot)

    return ResultDocument(
        kind=ResultKind.AUDIT,
        config_echo={
            "baseline": None if args.real_nonmembers else str(args.baseline),
            "real_nonmembers": args.real_nonmembers,
            "mia": str(args.mia),
            "audit_config": audit_config.model_dump(mode="json"),
        },
        audit_result=result,
    )


def run_aggregate(args: argparse.Namespace) -> ResultDocument:
    results = []
    for path in args.results:
        doc = load_result(path)
        if doc.kind is not ResultKind.AUDIT:
            raise InputError(f"{path} is a {doc.kind.value} document, not an audit document")
        results.append(doc.audit_result)
    return ResultDocument(
        kind=ResultKind.AGGREGATE,
        config_echo={"results": [str(path) for path in args.results]},
        audit_summary=aggregate_results(results),
    )


def run_o1(args: argparse.Namespace) -> ResultDocument:
    records = load_scores(_score_file(args.scores, args.format))
    result = o1_measure(records, grid_size=args.grid, beta=args.beta, param_cap=args.param_cap)
    return ResultDocument(
        kind=ResultKind.O1,
        config_echo={
            "scores": str(args.scores),
            "grid_size": args.grid,
            "beta": args.beta,
            "param_cap": args.param_cap,
        },
        o1_result=result,
    )


def world_from_args(args: argparse.Namespace) -> CategoricalWorld:
    if args.preset == "custom":
        if args.p_data is None or args.p_gen is None:
            raise ConfigurationError("the custom preset needs --p-data and --p-gen")
        base = {"symbol_probs_data": args.p_data, "symbol_probs_gen": args.p_gen}
    else:
        base = default_world(args.world_seed).model_dump()
    overrides = {
        "loss_separation": args.loss_separation,
        "loss_noise": args.loss_noise,
        "mia_weight": args.mia_weight,
        "m": args.m,
    }
    base.update({key: value for key, value in overrides.items() if value is not None})
    return CategoricalWorld.model_validate(base)


def run_simulate(args: argparse.Namespace) -> ResultDocument:
    world = world_from_args(args)
    audit_config = audit_config_from_args(args)
    c_star = true_c(world)
    logger.info("Simulating %d-symbol world with true c=%.6f", world.symbols, c_star)

    validity = validity_trials(world, args.trials, audit_config, args.seed)
    sweep = None
    if args.sweep:
        sweep = leakage_sweep(world, args.sweep, args.sweep_trials, audit_config, args.seed)
    relaxations = None
    if args.relaxations:
        sample = make_world_sample(world, args.seed)
        relaxations = relaxation_table(
            sample.baseline_records, sample.mia_records, audit_config, args.relaxations
        )

    report = SimulationReport(
        world=world,
        true_c=c_star,
        validity=validity,
        sweep=sweep,
        relaxations=relaxations,
        config_echo=audit_config,
    )
    return ResultDocument(
        kind=ResultKind.SIMULATION,
        seed=args.seed,
        config_echo={
            "preset": args.preset,
            "world_seed": args.world_seed,
            "trials": args.trials,
            "sweep": args.sweep,
            "sweep_trials": args.sweep_trials,
            "relaxations": args.relaxations,
            "audit_config": audit_config.model_dump(mode="json"),
        },
        simulation_report=report,
    )


def run_validate_bounds(args: argparse.Namespace) -> ResultDocument:
    report = run_validation_suite(args.trials, args.seed)
    return ResultDocument(
        kind=ResultKind.VALIDATION,
        seed=args.seed,
        config_echo={"trials": args.trials},
        validation_report=report,
    )
