from enum import Enum

from pydantic import BaseModel, ConfigDict


class BoundKind(str, Enum):
    """Tail bound used when testing a guess count against Bernoulli(p)."""

    EXACT = "exact"
    HOEFFDING = "hoeffding"


class TailQuery(BaseModel):
    """r guesses, each correct with probability p; is the count >= v unusual?"""

    model_config = ConfigDict(frozen=True)

    trials: int
    success_prob: float
    threshold: int


class FailureBudget(BaseModel):
    """Worst-case failure count F added to the tested sum under a relaxation.

    mean_cap bounds E[F] and support_cap bounds F itself.
    """

    model_config = ConfigDict(frozen=True)

    mean_cap: float = 0.0
    support_cap: int = 0

    @classmethod
    def none(cls) -> "FailureBudget":
        return cls(mean_cap=0.0, support_cap=0)


class SolvedParam(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    capped: bool = False
