"""Turn a threshold sweep into c_lb, {c+eps}_lb and eps_tilde."""

from collections.abc import Sequence
from typing import Optional
from logging import getLogger

import numpy as np
from scipy.special import expit

from app.audit.models import (
    AuditConfig,
    AuditMode,
    AuditResult,
    BaselineDeltaBudget,
    BoundEstimate,
    CurvePoint,
    RelaxationRow,
    ScoreRecord,
    UnionDenominator,
)
from app.audit.thresholds import SweepArrays, records_to_arrays, sweep_arrays
from app.common.errors import AlignmentError, ConfigurationError
from app.stats.models import FailureBudget
from app.stats.solver import solve_max_rejected_param, solve_max_rejected_params

logger = getLogger(__name__)


def failure_budget(config: AuditConfig, mode: AuditMode, audit_size: int) -> FailureBudget:
    """Worst-case failure count allowed by the (c, gamma) and (eps, delta) relaxations."""
    if mode is AuditMode.BASELINE:
        rate = config.gamma
        if config.baseline_delta_budget is BaselineDeltaBudget.DELTA and config.delta > 0:
            rate = config.delta
    elif config.delta == 0:
        rate = config.gamma
    else:
        rate = config.gamma + config.delta - config.gamma * config.delta
    # a count of audit_size failures is the most there can be
    mean_cap = min(2.0 * audit_size * rate, float(audit_size))
    return FailureBudget(mean_cap=mean_cap, support_cap=audit_size)


def per_test_level(config: AuditConfig, tests: int, audit_size: int) -> float:
    if not config.union_bound:
        return config.beta / 2
    if config.union_denominator is UnionDenominator.AUDIT_SIZE:
        return config.beta / (2 * audit_size)
    return config.beta / (2 * tests)


def _window(sweep: SweepArrays, config: AuditConfig) -> np.ndarray:
    recall = sweep.recall
    inside = np.flatnonzero((recall >= config.recall_min) & (recall <= config.recall_max))
    if inside.size == 0:
        raise ConfigurationError(
            f"no thresholds inside recall window [{config.recall_min}, {config.recall_max}]"
        )
    return inside


def _solve_window(
    tp: np.ndarray,
    r: np.ndarray,
    level: float,
    budget: FailureBudget,
    config: AuditConfig,
) -> np.ndarray:
    """Per-threshold bounds for every in-window threshold."""
    values, _ = solve_max_rejected_params(tp, r, level, config.bound_kind, config.param_cap)
    if budget.mean_cap == 0.0:
        return values
    relaxed = np.zeros_like(values)
    for i in np.flatnonzero(values > 0):
        relaxed[i] = solve_max_rejected_param(
            int(tp[i]), int(r[i]), level, budget, config.bound_kind, config.param_cap
        ).value
    return relaxed


def _best_relaxed(
    tp: np.ndarray,
    r: np.ndarray,
    unrelaxed: np.ndarray,
    level: float,
    budget: FailureBudget,
    config: AuditConfig,
) -> tuple[int, float, bool]:
    # the unrelaxed bound dominates the relaxed one, so visit thresholds in
    # descending unrelaxed order and stop once nothing left can win
    best_idx, best_value, best_capped = 0, 0.0, False
    solves = 0
    for i in np.argsort(-unrelaxed, kind="stable"):
        if unrelaxed[i] <= 0.0 or unrelaxed[i] < best_value:
            break
        solved = solve_max_rejected_param(
            int(tp[i]), int(r[i]), level, budget, config.bound_kind, config.param_cap
        )
        solves += 1
        if solved.value > best_value or (solved.value == best_value and i < best_idx):
            best_idx, best_value, best_capped = int(i), solved.value, solved.capped
    logger.debug("Relaxed search solved %d of %d thresholds", solves, tp.size)
    return best_idx, best_value, best_capped


def estimate_bound_from_scores(
    scores: np.ndarray, members: np.ndarray, config: AuditConfig, mode: AuditMode
) -> BoundEstimate:
    """Array form of estimate_bound, used by the simulator harnesses."""
    sweep = sweep_arrays(np.asarray(scores, dtype=float), np.asarray(members, dtype=bool))
    inside = _window(sweep, config)
    audit_size = int(np.size(scores))
    tests = int(inside.size)
    level = per_test_level(config, tests, audit_size)
    budget = failure_budget(config, mode, audit_size)

    tp = sweep.true_positives[inside]
    r = sweep.guesses[inside]
    values, capped = solve_max_rejected_params(tp, r, level, config.bound_kind, config.param_cap)
    if budget.mean_cap == 0.0:
        # first max in sweep order, i.e. the highest threshold
        best = int(np.argmax(values))
        value, is_capped = float(values[best]), bool(capped[best])
    else:
        best, value, is_capped = _best_relaxed(tp, r, values, level, budget, config)
        if value == 0.0 and values.max() > 0.0:
            logger.warning(
                "%s bound is 0 under relaxation although the unrelaxed bound is %.4f: "
                "failure mean %.3g is too large for per-test level %.3g",
                mode.value,
                float(values.max()),
                budget.mean_cap,
                level,
            )

    if is_capped:
        logger.warning("%s bound hit param_cap=%s", mode.value, config.param_cap)
    idx = inside[best]
    estimate = BoundEstimate(
        mode=mode,
        value=value,
        capped=is_capped,
        witness_threshold=float(sweep.tau[idx]),
        witness_recall=float(sweep.recall[idx]),
        witness_guesses=int(sweep.guesses[idx]),
        witness_tp=int(sweep.true_positives[idx]),
        per_test_level=level,
        tests_performed=tests,
    )
    logger.debug(
        "%s bound %.6f at tau=%s (r=%d, tp=%d, level=%.3g, mean_cap=%.3g)",
        mode.value,
        estimate.value,
        estimate.witness_threshold,
        estimate.witness_guesses,
        estimate.witness_tp,
        level,
        budget.mean_cap,
    )
    return estimate


def estimate_bound(
    records: Sequence[ScoreRecord], config: AuditConfig, mode: AuditMode
) -> BoundEstimate:
    scores, members = records_to_arrays(list(records))
    return estimate_bound_from_scores(scores, members, config, mode)


def check_alignment(
    baseline_records: Sequence[ScoreRecord], mia_records: Sequence[ScoreRecord]
) -> None:
    """Both lists must describe one game: same ids carrying the same secret bits."""
    if len(baseline_records) != len(mia_records):
        raise AlignmentError(
            f"baseline has {len(baseline_records)} records, mia has {len(mia_records)}"
        )
    bits = {rec.id: rec.member for rec in baseline_records}
    for rec in mia_records:
        if rec.id not in bits:
            raise AlignmentError(f"id '{rec.id}' is in mia records but not in baseline records")
        if bits[rec.id] != rec.member:
            raise AlignmentError(f"id '{rec.id}' has different membership bits")
    if len(bits) != len({rec.id for rec in mia_records}):
        raise AlignmentError("baseline and mia records have different id sets")


def combine(
    c_lb: BoundEstimate,
    c_plus_eps_lb: BoundEstimate,
    config: AuditConfig,
    real_nonmembers: bool = False,
) -> AuditResult:
    return AuditResult(
        c_lb=c_lb,
        c_plus_eps_lb=c_plus_eps_lb,
        eps_tilde=max(0.0, c_plus_eps_lb.value - c_lb.value),
        real_nonmembers=real_nonmembers,
        config_echo=config,
    )


def real_nonmember_estimate() -> BoundEstimate:
    """c_lb when the non-members are held-out real data rather than generated."""
    return BoundEstimate(mode=AuditMode.BASELINE, value=0.0, tests_performed=0)


def measure_real_nonmembers(
    mia_records: Sequence[ScoreRecord], config: AuditConfig
) -> AuditResult:
    """eps_tilde = {c+eps}_lb with c fixed at 0: real data is (0, 0)-close to itself."""
    if config.gamma > 0:
        logger.warning("Ignoring gamma=%s: real non-members need no relaxation", config.gamma)
        config = AuditConfig.model_validate({**config.model_dump(), "gamma": 0.0})
    result = combine(
        real_nonmember_estimate(),
        estimate_bound(mia_records, config, AuditMode.MIA),
        config,
        real_nonmembers=True,
    )
    logger.info(
        "Measured eps_tilde=%.6f against real non-members over %d records",
        result.eps_tilde,
        len(mia_records),
    )
    return result


def measure(
    baseline_records: Optional[Sequence[ScoreRecord]],
    mia_records: Sequence[ScoreRecord],
    config: AuditConfig,
) -> AuditResult:
    """Without baseline records the non-members are taken to be real data."""
    if baseline_records is None:
        return measure_real_nonmembers(mia_records, config)
    check_alignment(baseline_records, mia_records)
    result = combine(
        estimate_bound(baseline_records, config, AuditMode.BASELINE),
        estimate_bound(mia_records, config, AuditMode.MIA),
        config,
    )
    logger.info(
        "Measured c_lb=%.6f c_plus_eps_lb=%.6f eps_tilde=%.6f over %d records",
        result.c_lb.value,
        result.c_plus_eps_lb.value,
        result.eps_tilde,
        len(baseline_records),
    )
    return result


def measure_arrays(
    members: np.ndarray,
    baseline_scores: np.ndarray,
    mia_scores: np.ndarray,
    config: AuditConfig,
) -> AuditResult:
    """measure() over index-aligned arrays; alignment holds by construction."""
    return combine(
        estimate_bound_from_scores(baseline_scores, members, config, AuditMode.BASELINE),
        estimate_bound_from_scores(mia_scores, members, config, AuditMode.MIA),
        config,
    )


def bound_curve(
    records: Sequence[ScoreRecord], config: AuditConfig, mode: AuditMode
) -> list[CurvePoint]:
    """Every in-window threshold with the bound it would certify on its own."""
    scores, members = records_to_arrays(list(records))
    sweep = sweep_arrays(scores, members)
    inside = _window(sweep, config)
    level = per_test_level(config, int(inside.size), scores.size)
    budget = failure_budget(config, mode, scores.size)
    tp = sweep.true_positives[inside]
    r = sweep.guesses[inside]
    values = _solve_window(tp, r, level, budget, config)
    return [
        CurvePoint(
            tau=float(sweep.tau[idx]),
            recall=float(sweep.recall[idx]),
            precision=float(sweep.precision[idx]),
            guesses=int(sweep.guesses[idx]),
            true_positives=int(sweep.true_positives[idx]),
            bound=float(value),
            precision_bound=float(expit(value)),
        )
        for idx, value in zip(inside, values)
    ]


def relaxation_table(
    baseline_records: Sequence[ScoreRecord],
    mia_records: Sequence[ScoreRecord],
    config: AuditConfig,
    gammas: Sequence[float],
) -> list[RelaxationRow]:
    """Re-measure the same evidence at each generator relaxation gamma."""
    rows = []
    for gamma in gammas:
        relaxed = AuditConfig.model_validate({**config.model_dump(), "gamma": gamma})
        result = measure(baseline_records, mia_records, relaxed)
        rows.append(
            RelaxationRow(
                gamma=gamma,
                delta=relaxed.delta,
                c_lb=result.c_lb.value,
                c_plus_eps_lb=result.c_plus_eps_lb.value,
                eps_tilde=result.eps_tilde,
            )
        )
    return rows
