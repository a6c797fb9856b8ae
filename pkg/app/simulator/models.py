import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.audit.models import AuditConfig, AuditSummary, RelaxationRow, ScoreRecord

PROB_SUM_TOLERANCE = 1e-12


class CategoricalWorld(BaseModel):
    """Synthetic data distribution, generator and target-loss channel.

    Data points are symbols 0..K-1. Members are drawn from p_D, generated
    points from p_G. The target model's loss on a point is
    Normal(-loss_separation * member, loss_noise^2).
    """

    model_config = ConfigDict(frozen=True)

    symbol_probs_data: list[float]
    symbol_probs_gen: list[float]
    loss_separation: float = Field(default=0.0, ge=0.0)
    loss_noise: float = Field(default=1.0, gt=0.0)
    mia_weight: float = Field(default=1.0, ge=0.0)
    m: int = Field(default=2000, ge=1)

    @model_validator(mode="after")
    def probability_vectors(self) -> "CategoricalWorld":
        if len(self.symbol_probs_data) != len(self.symbol_probs_gen):
            raise ValueError("data and generator vectors must have the same number of symbols")
        if not self.symbol_probs_data:
            raise ValueError("at least one symbol is required")
        for name in ("symbol_probs_data", "symbol_probs_gen"):
            probs = getattr(self, name)
            if any(p < 0.0 or not math.isfinite(p) for p in probs):
                raise ValueError(f"{name} has a negative or non-finite entry")
            if abs(math.fsum(probs) - 1.0) > PROB_SUM_TOLERANCE:
                raise ValueError(f"{name} sums to {math.fsum(probs)}, not 1")
        return self

    @property
    def symbols(self) -> int:
        return len(self.symbol_probs_data)


class WorldSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    baseline_records: list[ScoreRecord]
    mia_records: list[ScoreRecord]
    true_c: float


class ValidityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int
    false_rejections: int
    rate: float
    true_c: float
    beta: float
    # beta plus two Monte Carlo standard errors
    rate_cap: float

    @property
    def passed(self) -> bool:
        return self.rate <= self.rate_cap


class SweepPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    separation: float
    median_eps_tilde: float
    trials: int
    summary: AuditSummary


class DominanceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    threshold: int
    empirical_tail: float
    binomial_tail: float
    standard_error: float
    dominated: bool


class DominanceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    guesses: int
    games: int
    true_c: float
    success_prob: float
    rows: list[DominanceRow]

    @property
    def passed(self) -> bool:
        return all(row.dominated for row in self.rows)


class SimulationReport(BaseModel):
    """Everything `simulate` computes for one world and seed."""

    model_config = ConfigDict(frozen=True)

    world: CategoricalWorld
    true_c: float
    validity: ValidityReport
    sweep: Optional[list[SweepPoint]] = None
    relaxations: Optional[list[RelaxationRow]] = None
    config_echo: AuditConfig
