from pydantic import BaseModel, ConfigDict, Field, model_validator


class AbstentionThresholds(BaseModel):
    """Guess member below t_plus, non-member above t_minus, abstain in between."""

    model_config = ConfigDict(frozen=True)

    t_plus: float
    t_minus: float

    @model_validator(mode="after")
    def ordered(self) -> "AbstentionThresholds":
        if not self.t_plus <= self.t_minus:
            raise ValueError(f"t_plus={self.t_plus} must not exceed t_minus={self.t_minus}")
        return self


class O1Result(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(ge=0.0)
    capped: bool = False
    guesses: int = Field(ge=0)
    correct: int = Field(ge=0)
    thresholds: AbstentionThresholds
    per_test_level: float
    combos_tested: int = Field(ge=1)
    grid_size: int = Field(ge=2)
    beta: float

    @model_validator(mode="after")
    def correct_within_guesses(self) -> "O1Result":
        if self.correct > self.guesses:
            raise ValueError("correct guesses cannot exceed guesses")
        return self
