"""Black-box one-run comparator: two loss thresholds with abstention.

Guesses count as correct for members called members and non-members called
non-members. The count of correct guesses is tested against a randomized
response Bernoulli(e^eps / (1 + e^eps)), with delta fixed at 0.
"""

from collections.abc import Sequence
from logging import getLogger
from typing import Optional

import numpy as np

from app.audit.models import ScoreRecord
from app.audit.thresholds import records_to_arrays
from app.common.errors import InputError, ParameterError
from app.config import config
from app.o1.models import AbstentionThresholds, O1Result
from app.stats.models import BoundKind
from app.stats.solver import solve_max_rejected_params

logger = getLogger(__name__)


def build_guesses(records: Sequence[ScoreRecord], t: AbstentionThresholds) -> tuple[int, int]:
    scores, members = records_to_arrays(list(records))
    guess_member = scores < t.t_plus
    guess_nonmember = scores > t.t_minus
    guesses = int(guess_member.sum() + guess_nonmember.sum())
    correct = int((guess_member & members).sum() + (guess_nonmember & ~members).sum())
    return guesses, correct


def quantile_grid(scores: np.ndarray, grid_size: int) -> np.ndarray:
    return np.unique(np.quantile(scores, np.linspace(0.0, 1.0, grid_size)))


def _pair_counts(scores: np.ndarray, members: np.ndarray, grid: np.ndarray):
    """(r, v) for every grid pair i <= j, as t_plus = grid[i], t_minus = grid[j]."""
    order = np.argsort(scores, kind="stable")
    s = scores[order]
    m = members[order]
    cum_members = np.concatenate(([0], np.cumsum(m)))
    cum_nonmembers = np.concatenate(([0], np.cumsum(~m)))

    below = np.searchsorted(s, grid, side="left")
    above_start = np.searchsorted(s, grid, side="right")
    below_correct = cum_members[below]
    above = s.size - above_start
    above_correct = cum_nonmembers[-1] - cum_nonmembers[above_start]

    i, j = np.triu_indices(grid.size)
    r = below[i] + above[j]
    v = below_correct[i] + above_correct[j]
    return i, j, r, v


def o1_measure(
    records: Sequence[ScoreRecord],
    grid_size: Optional[int] = None,
    beta: Optional[float] = None,
    param_cap: Optional[float] = None,
) -> O1Result:
    grid_size = config.o1_grid_size if grid_size is None else grid_size
    beta = config.default_beta if beta is None else beta
    if grid_size < 2:
        raise ParameterError(f"grid_size must be at least 2, got {grid_size}")
    if not 0.0 < beta < 1.0:
        raise ParameterError(f"beta must be in (0, 1), got {beta}")
    if not records:
        raise InputError("cannot run the comparator on an empty record set")

    scores, members = records_to_arrays(list(records))
    grid = quantile_grid(scores, grid_size)
    i, j, r, v = _pair_counts(scores, members, grid)
    tested = r >= 1
    combos = int(tested.sum())

    if combos == 0:
        logger.warning("Threshold grid collapsed to %d value(s); reporting epsilon 0", grid.size)
        return O1Result(
            epsilon=0.0,
            guesses=0,
            correct=0,
            thresholds=AbstentionThresholds(t_plus=float(grid[0]), t_minus=float(grid[0])),
            per_test_level=beta,
            combos_tested=1,
            grid_size=grid_size,
            beta=beta,
        )

    level = beta / combos
    i, j, r, v = i[tested], j[tested], r[tested], v[tested]
    values, capped = solve_max_rejected_params(v, r, level, BoundKind.EXACT, param_cap)
    best = int(np.argmax(values))
    result = O1Result(
        epsilon=float(values[best]),
        capped=bool(capped[best]),
        guesses=int(r[best]),
        correct=int(v[best]),
        thresholds=AbstentionThresholds(t_plus=float(grid[i[best]]), t_minus=float(grid[j[best]])),
        per_test_level=level,
        combos_tested=combos,
        grid_size=grid_size,
        beta=beta,
    )
    logger.info(
        "O(1) epsilon=%.6f over %d combos (r=%d, v=%d)",
        result.epsilon,
        combos,
        result.guesses,
        result.correct,
    )
    return result
