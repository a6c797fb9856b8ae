"""Tail probabilities of binary guess counts.

Every tail here is P[count >= v] where the count is Binomial(r, p), possibly
shifted by a worst-case failure count F. Tails are nonincreasing in v and
nondecreasing in p, which is what the parameter solver relies on.
"""

import math
from logging import getLogger

import numpy as np
from scipy.stats import binom

from app.common.errors import ParameterError
from app.stats.models import BoundKind, FailureBudget, TailQuery

logger = getLogger(__name__)


def _check_trials_and_prob(trials: int, success_prob: float) -> None:
    if trials < 0:
        raise ParameterError(f"trials must be nonnegative, got {trials}")
    if not 0.0 <= success_prob <= 1.0:
        raise ParameterError(f"success_prob must be in [0, 1], got {success_prob}")


def _check_budget(budget: FailureBudget) -> None:
    if budget.support_cap < 0:
        raise ParameterError(f"support_cap must be nonnegative, got {budget.support_cap}")
    if not 0.0 <= budget.mean_cap <= budget.support_cap:
        raise ParameterError(
            f"mean_cap must be in [0, support_cap={budget.support_cap}], got {budget.mean_cap}"
        )


def binomial_sf(v, r, p):
    """Vectorised P[Bin(r, p) >= v], with the forced values at v <= 0 and v > r."""
    v = np.asarray(v)
    r = np.asarray(r)
    with np.errstate(invalid="ignore"):
        inner = binom.sf(v - 1, r, p)
    return np.where(v <= 0, 1.0, np.where(v > r, 0.0, inner))


def hoeffding_sf(v, r, p):
    """Vectorised exp(-2r(v/r - p)^2) when v/r > p, else 1. Requires r >= 1."""
    v = np.asarray(v, dtype=float)
    r = np.asarray(r, dtype=float)
    gap = v / r - p
    return np.where(gap > 0, np.exp(-2.0 * r * np.square(np.maximum(gap, 0.0))), 1.0)


def tail_sf(v, r, p, bound_kind: BoundKind):
    if bound_kind is BoundKind.HOEFFDING:
        return hoeffding_sf(v, r, p)
    return binomial_sf(v, r, p)


def binomial_tail(q: TailQuery) -> float:
    _check_trials_and_prob(q.trials, q.success_prob)
    if q.threshold <= 0:
        return 1.0
    if q.threshold > q.trials:
        return 0.0
    return float(binom.sf(q.threshold - 1, q.trials, q.success_prob))


def hoeffding_tail(q: TailQuery) -> float:
    _check_trials_and_prob(q.trials, q.success_prob)
    if q.trials == 0:
        raise ParameterError("hoeffding_tail is undefined for zero trials")
    gap = q.threshold / q.trials - q.success_prob
    if gap <= 0:
        return 1.0
    return math.exp(-2.0 * q.trials * gap * gap)


def upper_concave_envelope(values: np.ndarray, at: float) -> float:
    """Value at `at` of the least concave majorant of the points (k, values[k])."""
    hull: list[tuple[int, float]] = []
    for k, y in enumerate(values.tolist()):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is on or under the chord
            if (y2 - y1) * (k - x1) <= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((k, y))
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= at <= x2:
            return y1 + (y2 - y1) * (at - x1) / (x2 - x1)
    return hull[-1][1]


_PAIR_GRID_LIMIT = 200_000


def envelope_by_pairs(values: np.ndarray, at: float) -> float:
    """Same quantity as upper_concave_envelope, as a max over pairs j <= at <= k."""
    j = np.arange(0, math.floor(at) + 1)[:, None]
    k = np.arange(math.ceil(at), values.size)[None, :]
    gj, gk = values[j], values[k]
    span = k - j
    with np.errstate(divide="ignore", invalid="ignore"):
        mixed = gj + (gk - gj) * (at - j) / span
    return float(np.max(np.where(span > 0, mixed, gj)))


def relaxed_tail_value(
    trials: int,
    success_prob: float,
    threshold: int,
    mean_cap: float,
    support_cap: int,
    bound_kind: BoundKind = BoundKind.EXACT,
) -> float:
    """Unchecked core of relaxed_tail, used inside the solver loop.

    The worst F solves a two-constraint LP (total mass 1, mean <= mean_cap),
    so an optimal vertex puts mass on two counts j <= mean_cap <= k. With
    g(k) the tail at v - k, the optimum is the concave majorant of g at
    mean_cap.
    """
    if threshold <= 0:
        return 1.0
    k_max = min(threshold, support_cap)
    ks = np.arange(k_max + 1)
    g = tail_sf(threshold - ks, trials, success_prob, bound_kind)
    if mean_cap <= 0.0 or k_max == 0:
        return float(g[0])
    if mean_cap >= k_max:
        return float(g[k_max])
    if (math.floor(mean_cap) + 1) * (k_max + 1) <= _PAIR_GRID_LIMIT:
        return min(1.0, envelope_by_pairs(g, mean_cap))
    return min(1.0, upper_concave_envelope(g, mean_cap))


def relaxed_tail(
    q: TailQuery, budget: FailureBudget, bound_kind: BoundKind = BoundKind.EXACT
) -> float:
    _check_trials_and_prob(q.trials, q.success_prob)
    _check_budget(budget)
    if bound_kind is BoundKind.HOEFFDING and q.trials == 0:
        raise ParameterError("hoeffding_tail is undefined for zero trials")
    if budget.mean_cap == 0.0:
        if bound_kind is BoundKind.HOEFFDING:
            return hoeffding_tail(q)
        return binomial_tail(q)
    return relaxed_tail_value(
        q.trials,
        q.success_prob,
        q.threshold,
        budget.mean_cap,
        budget.support_cap,
        bound_kind,
    )
