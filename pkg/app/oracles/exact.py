"""Deliberately naive reference computations used to check the fast paths.

All arithmetic is exact (fractions.Fraction), so these are slow and only
accept small inputs.
"""

import math
from fractions import Fraction
from typing import Union

from scipy.special import logit

from app.common.errors import SizeError

Rational = Union[Fraction, int, float]

MAX_ENUMERATION_TRIALS = 20
MAX_LP_SIZE = 6


def enumerate_tail(r: int, p: Rational, v: int) -> Fraction:
    """P[Bin(r, p) >= v] by summing C(r, k) p^k (1-p)^(r-k) over k >= v."""
    if r > MAX_ENUMERATION_TRIALS:
        raise SizeError(f"enumerate_tail supports r <= {MAX_ENUMERATION_TRIALS}, got {r}")
    p = Fraction(p)
    return sum(
        (math.comb(r, k) * p**k * (1 - p) ** (r - k) for k in range(max(v, 0), r + 1)),
        Fraction(0),
    )


def lp_worst_failure(
    r: int, p: Rational, v: int, mean_cap: Rational, support_cap: int
) -> Fraction:
    """max over distributions q on {0..support_cap} with E[F] <= mean_cap of
    sum_k q_k * P[Bin(r, p) >= v - k], by enumerating every basic feasible
    solution (supports of size one or two).
    """
    if r > MAX_LP_SIZE or support_cap > MAX_LP_SIZE:
        raise SizeError(f"lp_worst_failure supports r, support_cap <= {MAX_LP_SIZE}")
    mu = Fraction(mean_cap)
    g = [enumerate_tail(r, p, v - k) for k in range(support_cap + 1)]

    best = g[0]
    for k in range(support_cap + 1):
        if k <= mu:
            best = max(best, g[k])
    for j in range(support_cap + 1):
        for k in range(j + 1, support_cap + 1):
            if j <= mu <= k:
                weight = (mu - j) / (k - j)
                best = max(best, (1 - weight) * g[j] + weight * g[k])
    return best


def all_correct_param(r: int, level: float) -> float:
    """Largest rejected x when all r guesses are correct: p* = level^(1/r)."""
    return float(logit(level ** (1.0 / r)))
