"""Monte Carlo harnesses run over simulator worlds.

Trial t of a run with seed S draws from default_rng([S, t]), so trials can
be evaluated in any order and any subset reproduces.
"""

import math
from collections.abc import Sequence
from logging import getLogger

import numpy as np
from scipy.special import expit

from app.audit.aggregate import aggregate_results
from app.audit.engine import estimate_bound_from_scores, measure_arrays
from app.audit.models import AuditConfig, AuditMode, AuditResult
from app.common.errors import ParameterError, SizeError
from app.simulator.models import (
    CategoricalWorld,
    DominanceReport,
    DominanceRow,
    SweepPoint,
    ValidityReport,
)
from app.simulator.worlds import draw_world, true_c
from app.stats.tails import binomial_sf

logger = getLogger(__name__)

MIN_VALIDITY_TRIALS = 100
MIN_SWEEP_TRIALS = 10
SOUNDNESS_SLACK = 1e-9


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def validity_trials(
    world: CategoricalWorld, trials: int, config: AuditConfig, seed: int
) -> ValidityReport:
    """Count games where the baseline bound exceeds the world's true closeness."""
    if trials < MIN_VALIDITY_TRIALS:
        raise ParameterError(f"validity needs at least {MIN_VALIDITY_TRIALS} trials, got {trials}")
    c_star = true_c(world)
    false_rejections = 0
    for trial in range(trials):
        game = draw_world(world, _trial_rng(seed, trial))
        estimate = estimate_bound_from_scores(
            game.baseline, game.members, config, AuditMode.BASELINE
        )
        if estimate.value > c_star + SOUNDNESS_SLACK:
            false_rejections += 1
            logger.debug("Trial %d rejected c=%.6f with c_lb=%.6f", trial, c_star, estimate.value)

    rate = false_rejections / trials
    rate_cap = config.beta + 2 * math.sqrt(config.beta * (1 - config.beta) / trials)
    logger.info(
        "Validity: %d of %d trials exceeded true c=%.6f (rate %.4f, cap %.4f)",
        false_rejections,
        trials,
        c_star,
        rate,
        rate_cap,
    )
    return ValidityReport(
        trials=trials,
        false_rejections=false_rejections,
        rate=rate,
        true_c=c_star,
        beta=config.beta,
        rate_cap=rate_cap,
    )


def audit_trials(
    world: CategoricalWorld, trials: int, config: AuditConfig, seed: int
) -> list[AuditResult]:
    results = []
    for trial in range(trials):
        game = draw_world(world, _trial_rng(seed, trial))
        results.append(measure_arrays(game.members, game.baseline, game.mia, config))
    return results


def eps_tilde_trials(
    world: CategoricalWorld, trials: int, config: AuditConfig, seed: int
) -> np.ndarray:
    return np.array([r.eps_tilde for r in audit_trials(world, trials, config, seed)])


def leakage_sweep(
    world_template: CategoricalWorld,
    separations: Sequence[float],
    trials_per_level: int,
    config: AuditConfig,
    seed: int,
) -> list[SweepPoint]:
    """Median eps_tilde, and the spread of all three quantities, per loss separation.

    Every level reuses the same trial seeds, so levels differ only in the
    separation.
    """
    if trials_per_level < MIN_SWEEP_TRIALS:
        raise ParameterError(
            f"sweep needs at least {MIN_SWEEP_TRIALS} trials per level, got {trials_per_level}"
        )
    if any(s < 0 for s in separations) or list(separations) != sorted(separations):
        raise ParameterError(f"separations must be nonnegative and ascending, got {separations}")

    points = []
    for separation in separations:
        world = world_template.model_copy(update={"loss_separation": float(separation)})
        results = audit_trials(world, trials_per_level, config, seed)
        point = SweepPoint(
            separation=float(separation),
            median_eps_tilde=float(np.median([r.eps_tilde for r in results])),
            trials=trials_per_level,
            summary=aggregate_results(results),
        )
        points.append(point)
        logger.info(
            "Separation %.3f: median eps_tilde %.6f", separation, point.median_eps_tilde
        )
    return points


def dominance_check(
    world: CategoricalWorld,
    guesses: int,
    games: int,
    thresholds: Sequence[int],
    seed: int,
) -> DominanceReport:
    """Compare the tp tail of a fixed-size baseline guess with Binomial(r, e^c/(1+e^c)).

    Each game guesses member on the `guesses` points with the highest
    likelihood ratio, earliest index first among ties.
    """
    if guesses > world.m:
        raise SizeError(f"cannot guess on {guesses} points of a {world.m}-point game")
    if games < 1:
        raise ParameterError(f"games must be positive, got {games}")
    c_star = true_c(world)
    success_prob = float(expit(c_star))

    tp = np.empty(games, dtype=np.int64)
    for game_index in range(games):
        game = draw_world(world, _trial_rng(seed, game_index))
        chosen = np.argsort(-game.baseline, kind="stable")[:guesses]
        tp[game_index] = int(game.members[chosen].sum())

    rows = []
    for v in thresholds:
        empirical = float(np.mean(tp >= v))
        reference = float(binomial_sf(v, guesses, success_prob))
        se = math.sqrt(max(empirical * (1 - empirical), 1e-12) / games)
        rows.append(
            DominanceRow(
                threshold=int(v),
                empirical_tail=empirical,
                binomial_tail=reference,
                standard_error=se,
                dominated=empirical <= reference + 3 * se,
            )
        )
    report = DominanceReport(
        guesses=guesses, games=games, true_c=c_star, success_prob=success_prob, rows=rows
    )
    logger.info("Dominance over %d games: passed=%s", games, report.passed)
    return report
