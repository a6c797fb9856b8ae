import json
import sys
from enum import Enum
from logging import getLogger
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from app.audit.models import AuditResult, AuditSummary
from app.config import config
from app.o1.models import O1Result
from app.oracles.models import ValidationReport
from app.simulator.models import SimulationReport

logger = getLogger(__name__)


class ResultKind(str, Enum):
    AUDIT = "audit"
    O1 = "o1"
    SIMULATION = "simulation"
    VALIDATION = "validation"
    AGGREGATE = "aggregate"


_PAYLOAD_FIELD = {
    ResultKind.AUDIT: "audit_result",
    ResultKind.O1: "o1_result",
    ResultKind.SIMULATION: "simulation_report",
    ResultKind.VALIDATION: "validation_report",
    ResultKind.AGGREGATE: "audit_summary",
}


class ResultDocument(BaseModel):
    """What every command writes: one payload plus what is needed to rerun it."""

    model_config = ConfigDict(frozen=True)

    schema_version: str = config.schema_version
    tool_version: str = config.tool_version
    kind: ResultKind
    seed: Optional[int] = None
    config_echo: dict[str, Any]
    audit_result: Optional[AuditResult] = None
    o1_result: Optional[O1Result] = None
    simulation_report: Optional[SimulationReport] = None
    validation_report: Optional[ValidationReport] = None
    audit_summary: Optional[AuditSummary] = None

    @model_validator(mode="after")
    def payload_matches_kind(self) -> "ResultDocument":
        present = [field for field in _PAYLOAD_FIELD.values() if getattr(self, field) is not None]
        if present != [_PAYLOAD_FIELD[self.kind]]:
            raise ValueError(
                f"a {self.kind.value} document carries exactly '{_PAYLOAD_FIELD[self.kind]}', "
                f"got {present}"
            )
        return self


def serialize_result(doc: ResultDocument) -> str:
    # no timestamps, sorted keys: identical runs give identical bytes
    return json.dumps(doc.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_result(doc: ResultDocument, path: Optional[str | Path] = None) -> None:
    text = serialize_result(doc)
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s document to %s", doc.kind.value, path)


def load_result(path: str | Path) -> ResultDocument:
    return ResultDocument.model_validate_json(Path(path).read_text(encoding="utf-8"))
