import math
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.stats.models import BoundKind


class AuditMode(str, Enum):
    """Which test a score set feeds: the baseline bounds c, the MIA bounds c+eps."""

    BASELINE = "baseline"
    MIA = "mia"


class UnionDenominator(str, Enum):
    TESTS = "tests"
    AUDIT_SIZE = "audit_size"


class BaselineDeltaBudget(str, Enum):
    GAMMA = "gamma"
    DELTA = "delta"


class ScoreRecord(BaseModel):
    """One audit example: membership score plus the secret membership bit."""

    model_config = ConfigDict(frozen=True)

    id: str
    score: float
    member: bool

    @field_validator("score")
    @classmethod
    def score_is_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("score must be finite")
        return value


class AuditPoint(BaseModel):
    """A candidate before the coin flip: an id plus whatever the scorers read."""

    model_config = ConfigDict(frozen=True)

    id: str
    payload: Any = None


class GamePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    id: str
    payload: Any = None
    member: bool


class PairedAuditSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    member_pool: list[AuditPoint]
    generated_pool: list[AuditPoint]
    size: int = Field(ge=1)


class ThresholdStat(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau: float
    guesses: int = Field(ge=1)
    true_positives: int = Field(ge=0)
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)


class AuditConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta: float = Field(default=0.05, gt=0.0, lt=1.0)
    gamma: float = Field(default=0.0, ge=0.0, le=1.0)
    delta: float = Field(default=0.0, ge=0.0, le=1.0)
    bound_kind: BoundKind = BoundKind.EXACT
    union_bound: bool = True
    union_denominator: UnionDenominator = UnionDenominator.TESTS
    baseline_delta_budget: BaselineDeltaBudget = BaselineDeltaBudget.GAMMA
    recall_min: float = Field(default=0.0, ge=0.0, le=1.0)
    recall_max: float = Field(default=1.0, ge=0.0, le=1.0)
    param_cap: float = Field(default=20.0, gt=0.0)

    @model_validator(mode="after")
    def recall_window_nonempty(self) -> "AuditConfig":
        if self.recall_min > self.recall_max:
            raise ValueError(
                f"recall window [{self.recall_min}, {self.recall_max}] is empty"
            )
        return self


class BoundEstimate(BaseModel):
    """A solved lower bound and the threshold that certified it.

    The witness fields are unset when no threshold was tested, as for the
    c_lb of an audit whose non-members are real data.
    """

    model_config = ConfigDict(frozen=True)

    mode: AuditMode
    value: float = Field(ge=0.0)
    capped: bool = False
    witness_threshold: Optional[float] = None
    witness_recall: Optional[float] = None
    witness_guesses: Optional[int] = None
    witness_tp: Optional[int] = None
    per_test_level: Optional[float] = None
    tests_performed: int = Field(ge=0)


class AuditResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    c_lb: BoundEstimate
    c_plus_eps_lb: BoundEstimate
    eps_tilde: float = Field(ge=0.0)
    real_nonmembers: bool = False
    config_echo: AuditConfig


class CurvePoint(BaseModel):
    """One in-window threshold with the bound it alone would certify."""

    model_config = ConfigDict(frozen=True)

    tau: float
    recall: float
    precision: float
    guesses: int
    true_positives: int
    bound: float
    precision_bound: float


class RelaxationRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float
    delta: float
    c_lb: float
    c_plus_eps_lb: float
    eps_tilde: float


class SummaryStat(BaseModel):
    """Spread of one quantity over independent runs; the interval is a 95% t-interval."""

    model_config = ConfigDict(frozen=True)

    runs: int = Field(ge=1)
    mean: float
    std: float = Field(ge=0.0)
    min: float
    max: float
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None


class AuditSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    runs: int = Field(ge=1)
    c_lb: SummaryStat
    c_plus_eps_lb: SummaryStat
    eps_tilde: SummaryStat
    real_nonmembers: bool = False
    config_echo: AuditConfig
