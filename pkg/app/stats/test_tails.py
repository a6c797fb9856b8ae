import math
from fractions import Fraction

import numpy as np
import pytest

from app.common.errors import ParameterError
from app.oracles.exact import enumerate_tail, lp_worst_failure
from app.stats.models import BoundKind, FailureBudget, TailQuery
from app.stats.tails import (
    binomial_tail,
    envelope_by_pairs,
    hoeffding_tail,
    relaxed_tail,
    upper_concave_envelope,
)


def q(r, p, v):
    return TailQuery(trials=r, success_prob=p, threshold=v)


def test_binomial_tail_symmetric_case():
    assert binomial_tail(q(3, 0.5, 2)) == pytest.approx(0.5, abs=1e-15)


def test_binomial_tail_at_zero_is_total_mass():
    assert binomial_tail(q(17, 0.33, 0)) == 1.0


def test_binomial_tail_all_successes():
    assert binomial_tail(q(10, 0.9, 10)) == pytest.approx(0.3486784401, rel=1e-12)


def test_binomial_tail_matches_hand_sum():
    p = math.e / (1 + math.e)
    expected = 5 * p**4 * (1 - p) + p**5
    assert binomial_tail(q(5, p, 4)) == pytest.approx(expected, rel=1e-12)


def test_binomial_tail_above_trials_is_zero():
    assert binomial_tail(q(4, 0.7, 5)) == 0.0


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_binomial_tail_rejects_bad_probability(p):
    with pytest.raises(ParameterError):
        binomial_tail(q(3, p, 1))


def test_binomial_tail_rejects_negative_trials():
    with pytest.raises(ParameterError):
        binomial_tail(q(-1, 0.5, 0))


def test_binomial_tail_matches_exact_enumeration_grid():
    for r in range(0, 21):
        for tenths in range(1, 10):
            p = Fraction(tenths, 10)
            for v in range(0, r + 2):
                expected = float(enumerate_tail(r, p, v))
                got = binomial_tail(q(r, float(p), v))
                assert got == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_binomial_tail_monotone_on_random_grid():
    rng = np.random.default_rng(11)
    for _ in range(200):
        r = int(rng.integers(1, 21))
        p_lo, p_hi = sorted(rng.uniform(0, 1, size=2))
        tails = [binomial_tail(q(r, p_lo, v)) for v in range(r + 2)]
        assert all(a >= b for a, b in zip(tails, tails[1:]))
        for v in range(r + 2):
            assert binomial_tail(q(r, p_hi, v)) >= binomial_tail(q(r, p_lo, v))


def test_hoeffding_tail_capped_at_one():
    assert hoeffding_tail(q(100, 0.5, 50)) == 1.0


def test_hoeffding_tail_closed_form():
    assert hoeffding_tail(q(100, 0.5, 60)) == pytest.approx(math.exp(-2), rel=1e-12)


def test_hoeffding_tail_dominates_exact_tail():
    bound = hoeffding_tail(q(8, 0.6, 7))
    assert bound == pytest.approx(math.exp(-2 * 8 * (0.875 - 0.6) ** 2), rel=1e-12)
    assert binomial_tail(q(8, 0.6, 7)) < bound
    for r in range(1, 21):
        for p in (0.1, 0.35, 0.5, 0.8):
            for v in range(r + 2):
                assert hoeffding_tail(q(r, p, v)) >= binomial_tail(q(r, p, v))


def test_hoeffding_tail_needs_trials():
    with pytest.raises(ParameterError):
        hoeffding_tail(q(0, 0.5, 0))


def test_relaxed_tail_without_failures_is_binomial():
    budget = FailureBudget(mean_cap=0.0, support_cap=2)
    assert relaxed_tail(q(2, 0.5, 2), budget) == pytest.approx(0.25)
    for r in range(7):
        for v in range(r + 2):
            assert relaxed_tail(q(r, 0.3, v), budget) == pytest.approx(
                binomial_tail(q(r, 0.3, v)), abs=1e-12
            )


def test_relaxed_tail_certain_failure():
    budget = FailureBudget(mean_cap=2.0, support_cap=2)
    assert relaxed_tail(q(2, 0.5, 2), budget) == pytest.approx(1.0)


def test_relaxed_tail_two_point_optimum():
    budget = FailureBudget(mean_cap=0.5, support_cap=2)
    assert relaxed_tail(q(2, 0.5, 2), budget) == pytest.approx(0.5)


def test_relaxed_tail_rejects_mean_above_support():
    with pytest.raises(ParameterError):
        relaxed_tail(q(2, 0.5, 2), FailureBudget(mean_cap=3.0, support_cap=2))


def test_relaxed_tail_nondecreasing_in_mean_cap():
    caps = np.linspace(0, 6, 25)
    for v in range(0, 8):
        values = [
            relaxed_tail(q(6, 0.4, v), FailureBudget(mean_cap=c, support_cap=6)) for c in caps
        ]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_relaxed_tail_matches_vertex_lp():
    means = [Fraction(k, 4) for k in (0, 1, 2, 3, 4, 5, 7, 8, 10, 13, 16, 18, 21, 24)]
    for r in range(0, 7):
        for support in range(0, 7):
            for p in (Fraction(1, 3), Fraction(1, 2), Fraction(4, 5)):
                for v in range(0, r + support + 2):
                    for mu in means:
                        if mu > support:
                            continue
                        expected = float(lp_worst_failure(r, p, v, mu, support))
                        got = relaxed_tail(
                            q(r, float(p), v),
                            FailureBudget(mean_cap=float(mu), support_cap=support),
                        )
                        assert got == pytest.approx(expected, abs=1e-9)


def test_concave_envelope_beats_zero_anchored_support():
    g = np.array([0.0, 0.9, 0.9, 1.0])
    assert upper_concave_envelope(g, 1.5) == pytest.approx(0.925)
    assert envelope_by_pairs(g, 1.5) == pytest.approx(0.925)


def test_envelope_strategies_agree():
    rng = np.random.default_rng(21)
    for _ in range(300):
        size = int(rng.integers(2, 40))
        g = np.sort(rng.uniform(size=size))
        g[0] = rng.uniform(0, g[0])
        at = float(rng.uniform(0, size - 1))
        assert envelope_by_pairs(g, at) == pytest.approx(upper_concave_envelope(g, at), abs=1e-12)
    g = np.array([0.1, 0.4, 0.6])
    assert envelope_by_pairs(g, 1.0) == pytest.approx(upper_concave_envelope(g, 1.0), abs=1e-15)


def test_relaxed_tail_hoeffding_kind_dominates_exact():
    budget = FailureBudget(mean_cap=1.0, support_cap=5)
    exact = relaxed_tail(q(20, 0.5, 16), budget, BoundKind.EXACT)
    loose = relaxed_tail(q(20, 0.5, 16), budget, BoundKind.HOEFFDING)
    assert loose >= exact
