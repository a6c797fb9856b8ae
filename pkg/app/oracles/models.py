from pydantic import BaseModel, ConfigDict


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    # worst error, rate or fraction observed by the check
    detail: float
    cases: int


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
