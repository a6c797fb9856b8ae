"""The validate-bounds suite: fast paths against oracles, plus simulator soundness."""

from fractions import Fraction
from logging import getLogger

import numpy as np

from app.audit.models import AuditConfig
from app.oracles.exact import all_correct_param, enumerate_tail, lp_worst_failure
from app.oracles.models import CheckResult, ValidationReport
from app.simulator.harness import MIN_VALIDITY_TRIALS, dominance_check, validity_trials
from app.simulator.worlds import default_world
from app.stats.models import BoundKind, FailureBudget, TailQuery
from app.stats.solver import solve_max_rejected_param
from app.stats.tails import binomial_tail, relaxed_tail

logger = getLogger(__name__)

TAIL_TOLERANCE = 1e-12
LP_TOLERANCE = 1e-9
CLOSED_FORM_TOLERANCE = 1e-6
CLOSED_FORM_LEVEL = 0.025


def check_binomial_tail() -> CheckResult:
    worst, cases = 0.0, 0
    for r in range(21):
        for tenths in range(1, 10):
            p = Fraction(tenths, 10)
            for v in range(r + 2):
                expected = float(enumerate_tail(r, p, v))
                got = binomial_tail(TailQuery(trials=r, success_prob=float(p), threshold=v))
                error = abs(got - expected) / expected if expected > 0 else abs(got)
                worst = max(worst, error)
                cases += 1
    return CheckResult(
        name="binomial_tail_vs_enumeration",
        passed=worst <= TAIL_TOLERANCE,
        detail=worst,
        cases=cases,
    )


def check_relaxed_tail() -> CheckResult:
    worst, cases = 0.0, 0
    for r in range(1, 7):
        for support in range(7):
            for p in (Fraction(1, 10), Fraction(1, 2), Fraction(7, 10)):
                for v in range(r + support + 2):
                    for quarters in range(4 * support + 1):
                        mu = Fraction(quarters, 4)
                        expected = float(lp_worst_failure(r, p, v, mu, support))
                        got = relaxed_tail(
                            TailQuery(trials=r, success_prob=float(p), threshold=v),
                            FailureBudget(mean_cap=float(mu), support_cap=support),
                        )
                        worst = max(worst, abs(got - expected))
                        cases += 1
    return CheckResult(
        name="relaxed_tail_vs_vertex_lp", passed=worst <= LP_TOLERANCE, detail=worst, cases=cases
    )


def check_closed_form() -> CheckResult:
    worst = 0.0
    sizes = (10, 100, 1000)
    for r in sizes:
        solved = solve_max_rejected_param(r, r, CLOSED_FORM_LEVEL).value
        worst = max(worst, abs(solved - all_correct_param(r, CLOSED_FORM_LEVEL)))
    return CheckResult(
        name="all_correct_closed_form",
        passed=worst <= CLOSED_FORM_TOLERANCE,
        detail=worst,
        cases=len(sizes),
    )


def check_exact_beats_hoeffding(trials: int, seed: int) -> CheckResult:
    rng = np.random.default_rng([seed, 0])
    strict, violations = 0, 0
    for _ in range(trials):
        r = int(rng.integers(50, 1001))
        tp = int(rng.integers(r // 2, r + 1))
        level = float(rng.uniform(1e-3, 0.1))
        exact = solve_max_rejected_param(tp, r, level, bound_kind=BoundKind.EXACT).value
        loose = solve_max_rejected_param(tp, r, level, bound_kind=BoundKind.HOEFFDING).value
        violations += exact < loose
        strict += exact > loose
    fraction = strict / trials
    return CheckResult(
        name="exact_at_least_hoeffding",
        passed=violations == 0 and fraction >= 0.5,
        detail=fraction,
        cases=trials,
    )


def check_soundness(trials: int, seed: int) -> CheckResult:
    report = validity_trials(
        default_world(), max(trials, MIN_VALIDITY_TRIALS), AuditConfig(), seed
    )
    return CheckResult(
        name="simulator_soundness", passed=report.passed, detail=report.rate, cases=report.trials
    )


def check_dominance(seed: int) -> CheckResult:
    report = dominance_check(default_world(), 200, 2000, [110, 130, 150], seed)
    gap = max(row.empirical_tail - row.binomial_tail for row in report.rows)
    return CheckResult(
        name="tp_dominated_by_binomial", passed=report.passed, detail=gap, cases=report.games
    )


def run_validation_suite(trials: int, seed: int) -> ValidationReport:
    checks = [
        check_binomial_tail(),
        check_relaxed_tail(),
        check_closed_form(),
        check_exact_beats_hoeffding(trials, seed),
        check_soundness(trials, seed),
        check_dominance(seed),
    ]
    for check in checks:
        log = logger.info if check.passed else logger.error
        log(
            "Check %s: passed=%s detail=%.3g over %d cases",
            check.name,
            check.passed,
            check.detail,
            check.cases,
        )
    return ValidationReport(trials=trials, checks=checks)
