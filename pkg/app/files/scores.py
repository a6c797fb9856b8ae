import csv
import json
import math
from collections.abc import Iterator
from enum import Enum
from logging import getLogger
from pathlib import Path
from typing import Any, BinaryIO, Optional

from pydantic import BaseModel, ConfigDict

from app.audit.models import ScoreRecord
from app.common.errors import InputError, ScoreFileError

logger = getLogger(__name__)

COLUMNS = ("id", "score", "member")
TRUE_WORDS = {"true", "1"}
FALSE_WORDS = {"false", "0"}


class ScoreFormat(str, Enum):
    JSONL = "jsonl"
    CSV = "csv"


_SUFFIXES = {".jsonl": ScoreFormat.JSONL, ".json": ScoreFormat.JSONL, ".csv": ScoreFormat.CSV}


class ScoreFile(BaseModel):
    model_config = ConfigDict(frozen=True)

    path: Path
    format: ScoreFormat

    @classmethod
    def from_path(cls, path: str | Path, format: Optional[ScoreFormat] = None) -> "ScoreFile":
        path = Path(path)
        if format is None:
            format = _SUFFIXES.get(path.suffix.lower())
            if format is None:
                raise InputError(
                    f"cannot infer score format from '{path.name}'; use a .jsonl or .csv file"
                )
        return cls(path=path, format=format)


def _parse_id(value: Any, line: int) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ScoreFileError("id must be a string", line=line, column="id")
    text = str(value).strip()
    if not text:
        raise ScoreFileError("id is empty", line=line, column="id")
    return text


def _parse_score(value: Any, line: int) -> float:
    if isinstance(value, bool) or value is None:
        raise ScoreFileError(f"score {value!r} is not a number", line=line, column="score")
    try:
        score = float(value)
    except (TypeError, ValueError) as e:
        raise ScoreFileError(
            f"score {value!r} is not a number", line=line, column="score"
        ) from e
    if not math.isfinite(score):
        raise ScoreFileError(f"score {value!r} is not finite", line=line, column="score")
    return score


def _parse_member(value: Any, line: int) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)) and value in (0, 1):
        return bool(value)
    if isinstance(value, str):
        word = value.strip().lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
    raise ScoreFileError(
        f"member {value!r} is not true/false or 0/1", line=line, column="member"
    )


def _decoded_lines(f: BinaryIO) -> Iterator[str]:
    for line_no, raw in enumerate(f, start=1):
        try:
            # utf-8-sig drops a byte order mark (spreadsheet exports) on the first line
            line = raw.decode("utf-8-sig" if line_no == 1 else "utf-8")
        except UnicodeDecodeError as e:
            raise ScoreFileError(f"not valid UTF-8 at byte {e.start}", line=line_no) from e
        yield line


def _jsonl_rows(path: Path) -> Iterator[tuple[int, dict]]:
    with path.open("rb") as f:
        for line_no, line in enumerate(_decoded_lines(f), start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as e:
                raise ScoreFileError(f"invalid JSON ({e.msg})", line=line_no) from e
            if not isinstance(row, dict):
                raise ScoreFileError("expected a JSON object", line=line_no)
            yield line_no, row


def _csv_rows(path: Path) -> Iterator[tuple[int, dict]]:
    with path.open("rb") as f:
        reader = csv.DictReader(_decoded_lines(f))
        header = [name.strip() for name in reader.fieldnames or []]
        missing = [name for name in COLUMNS if name not in header]
        if missing:
            raise ScoreFileError(f"header is missing {', '.join(missing)}", line=1)
        reader.fieldnames = header
        for row in reader:
            yield reader.line_num, row


def load_scores(file: ScoreFile) -> list[ScoreRecord]:
    """Read (id, score, member) rows in file order."""
    if not file.path.is_file():
        raise InputError(f"score file not found: {file.path}")
    rows = _jsonl_rows(file.path) if file.format is ScoreFormat.JSONL else _csv_rows(file.path)

    records: list[ScoreRecord] = []
    seen: set[str] = set()
    for line, row in rows:
        for column in COLUMNS:
            if row.get(column) is None:
                raise ScoreFileError("value is missing", line=line, column=column)
        record_id = _parse_id(row["id"], line)
        if record_id in seen:
            raise ScoreFileError(f"duplicate id '{record_id}'", line=line, column="id")
        seen.add(record_id)
        records.append(
            ScoreRecord(
                id=record_id,
                score=_parse_score(row["score"], line),
                member=_parse_member(row["member"], line),
            )
        )

    if not records:
        raise ScoreFileError(f"{file.path} contains no records")
    logger.info("Loaded %d records from %s", len(records), file.path)
    return records


def load_scores_from(path: str | Path, format: Optional[ScoreFormat] = None) -> list[ScoreRecord]:
    return load_scores(ScoreFile.from_path(path, format))
