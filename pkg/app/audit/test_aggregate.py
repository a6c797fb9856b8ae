import numpy as np
import pytest
from scipy.stats import t as student_t

from app.audit.aggregate import aggregate_results, summarize
from app.audit.engine import measure
from app.audit.models import AuditConfig, ScoreRecord
from app.common.errors import ConfigurationError, InputError


def _run(seed, config=AuditConfig(), real_nonmembers=False):
    rng = np.random.default_rng(seed)
    members = rng.integers(0, 2, size=300).astype(bool)
    scores = rng.normal(size=300) + 0.5 * members
    baseline = [
        ScoreRecord(id=f"r{i}", score=float(s), member=bool(m))
        for i, (s, m) in enumerate(zip(scores, members))
    ]
    mia = [r.model_copy(update={"score": r.score + 2.0 * r.member}) for r in baseline]
    return measure(None if real_nonmembers else baseline, mia, config)


def test_summary_of_known_values():
    stat = summarize([2.25, 2.44, 2.63])
    assert stat.runs == 3
    assert stat.mean == pytest.approx(2.44)
    assert stat.std == pytest.approx(0.19)
    assert (stat.min, stat.max) == (2.25, 2.63)
    half_width = student_t.ppf(0.975, 2) * 0.19 / np.sqrt(3)
    assert stat.ci_low == pytest.approx(2.44 - half_width)
    assert stat.ci_high == pytest.approx(2.44 + half_width)


def test_single_run_has_no_interval():
    stat = summarize([1.5])
    assert (stat.mean, stat.std, stat.ci_low, stat.ci_high) == (1.5, 0.0, None, None)


def test_aggregates_each_quantity():
    results = [_run(seed) for seed in range(4)]
    summary = aggregate_results(results)
    assert summary.runs == 4
    assert summary.c_lb.mean == pytest.approx(np.mean([r.c_lb.value for r in results]))
    assert summary.c_plus_eps_lb.max == max(r.c_plus_eps_lb.value for r in results)
    assert summary.eps_tilde.std == pytest.approx(np.std([r.eps_tilde for r in results], ddof=1))
    assert summary.config_echo == AuditConfig()


def test_refuses_mixed_runs():
    with pytest.raises(ConfigurationError):
        aggregate_results([_run(0), _run(1, AuditConfig(beta=0.1))])
    with pytest.raises(ConfigurationError):
        aggregate_results([_run(0), _run(1, real_nonmembers=True)])
    with pytest.raises(InputError):
        aggregate_results([])
    with pytest.raises(InputError):
        summarize([])
