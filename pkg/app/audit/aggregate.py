"""Mean and spread of audit results over independent runs."""

import math
from collections.abc import Sequence
from logging import getLogger

import numpy as np
from scipy.stats import t as student_t

from app.audit.models import AuditResult, AuditSummary, SummaryStat
from app.common.errors import ConfigurationError, InputError

logger = getLogger(__name__)

CI_LEVEL = 0.95


def summarize(values: Sequence[float]) -> SummaryStat:
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise InputError("cannot summarize zero runs")
    mean = float(np.mean(data))
    if data.size == 1:
        return SummaryStat(runs=1, mean=mean, std=0.0, min=mean, max=mean)
    std = float(np.std(data, ddof=1))
    quantile = float(student_t.ppf(0.5 + CI_LEVEL / 2, data.size - 1))
    half_width = quantile * std / math.sqrt(data.size)
    return SummaryStat(
        runs=int(data.size),
        mean=mean,
        std=std,
        min=float(data.min()),
        max=float(data.max()),
        ci_low=mean - half_width,
        ci_high=mean + half_width,
    )


def aggregate_results(results: Sequence[AuditResult]) -> AuditSummary:
    """Combine audits of independent runs made with one configuration."""
    if not results:
        raise InputError("no audit results to aggregate")
    first = results[0]
    for result in results[1:]:
        if result.config_echo != first.config_echo:
            raise ConfigurationError("audit results were measured with different configurations")
        if result.real_nonmembers != first.real_nonmembers:
            raise ConfigurationError("cannot mix real non-member and generated non-member audits")

    summary = AuditSummary(
        runs=len(results),
        c_lb=summarize([r.c_lb.value for r in results]),
        c_plus_eps_lb=summarize([r.c_plus_eps_lb.value for r in results]),
        eps_tilde=summarize([r.eps_tilde for r in results]),
        real_nonmembers=first.real_nonmembers,
        config_echo=first.config_echo,
    )
    logger.info(
        "Aggregated %d runs: eps_tilde %.4f +/- %.4f",
        summary.runs,
        summary.eps_tilde.mean,
        summary.eps_tilde.std,
    )
    return summary
