"""Invert a tail test into the largest rejected closeness/privacy parameter.

The parameter x enters the test only through p = e^x / (1 + e^x). The tail is
nondecreasing in x, so the set of rejected parameters {x : tail(x) <= level}
is an interval [0, x*) and x* is found by bisection.
"""

import math
from logging import getLogger
from typing import Optional

import numpy as np
from scipy.special import expit

from app.common.errors import NumericalError, ParameterError
from app.config import config
from app.stats.models import BoundKind, FailureBudget, SolvedParam
from app.stats.tails import relaxed_tail_value, tail_sf

logger = getLogger(__name__)


def _iterations(param_cap: float, tolerance: float) -> int:
    # halve until the bracket is below half the tolerance
    return max(1, math.ceil(math.log2(param_cap / tolerance))) + 1


def _check_common(per_test_level: float, param_cap: float) -> None:
    if not 0.0 < per_test_level < 1.0:
        raise ParameterError(f"per_test_level must be in (0, 1), got {per_test_level}")
    if not param_cap > 0.0:
        raise ParameterError(f"param_cap must be positive, got {param_cap}")


def solve_max_rejected_params(
    tp,
    r,
    per_test_level: float,
    bound_kind: BoundKind = BoundKind.EXACT,
    param_cap: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Solve many (tp, r) pairs at once with no failure budget.

    Returns (values, capped) arrays aligned with the inputs.
    """
    param_cap = config.default_param_cap if param_cap is None else param_cap
    tolerance = config.bisection_tolerance if tolerance is None else tolerance
    _check_common(per_test_level, param_cap)
    tp = np.atleast_1d(np.asarray(tp, dtype=np.int64))
    r = np.atleast_1d(np.asarray(r, dtype=np.int64))
    if np.any(tp < 0) or np.any(tp > r):
        raise ParameterError("true positives must satisfy 0 <= tp <= r")

    def tail(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return tail_sf(tp, np.maximum(r, 1), expit(x), bound_kind)

    lo = np.zeros(tp.shape, dtype=float)
    hi = np.full(tp.shape, float(param_cap))
    rejects_zero = (tail(lo) <= per_test_level) & (tp > 0)
    capped = rejects_zero & (tail(hi) <= per_test_level)
    active = rejects_zero & ~capped

    if np.any(active):
        for _ in range(_iterations(param_cap, tolerance)):
            mid = 0.5 * (lo + hi)
            values = tail(mid)
            if np.any(np.isnan(values[active])):
                raise NumericalError("tail probability evaluated to NaN during bisection")
            ok = values <= per_test_level
            lo = np.where(active & ok, mid, lo)
            hi = np.where(active & ~ok, mid, hi)

    result = np.where(capped, float(param_cap), np.where(active, lo, 0.0))
    return result, capped


def solve_max_rejected_param(
    tp: int,
    r: int,
    per_test_level: float,
    budget: Optional[FailureBudget] = None,
    bound_kind: BoundKind = BoundKind.EXACT,
    param_cap: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> SolvedParam:
    param_cap = config.default_param_cap if param_cap is None else param_cap
    tolerance = config.bisection_tolerance if tolerance is None else tolerance
    _check_common(per_test_level, param_cap)
    if tp < 0 or r < 0 or tp > r:
        raise ParameterError(f"true positives must satisfy 0 <= tp <= r, got tp={tp}, r={r}")
    budget = budget or FailureBudget.none()
    if not 0.0 <= budget.mean_cap <= budget.support_cap:
        raise ParameterError(
            f"mean_cap must be in [0, support_cap={budget.support_cap}], got {budget.mean_cap}"
        )

    if budget.mean_cap == 0.0:
        values, capped = solve_max_rejected_params(
            [tp], [r], per_test_level, bound_kind, param_cap, tolerance
        )
        return SolvedParam(value=float(values[0]), capped=bool(capped[0]))

    if tp == 0:
        return SolvedParam(value=0.0)

    def tail(x: float) -> float:
        value = relaxed_tail_value(
            r, float(expit(x)), tp, budget.mean_cap, budget.support_cap, bound_kind
        )
        if math.isnan(value):
            raise NumericalError("relaxed tail evaluated to NaN during bisection")
        return value

    if tail(0.0) > per_test_level:
        return SolvedParam(value=0.0)
    if tail(param_cap) <= per_test_level:
        logger.debug("Relaxed solve saturated at param_cap=%s (tp=%d, r=%d)", param_cap, tp, r)
        return SolvedParam(value=float(param_cap), capped=True)

    lo, hi = 0.0, float(param_cap)
    for _ in range(_iterations(param_cap, tolerance)):
        mid = 0.5 * (lo + hi)
        if tail(mid) <= per_test_level:
            lo = mid
        else:
            hi = mid
    return SolvedParam(value=lo)
