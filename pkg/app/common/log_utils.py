import json
import logging
import logging.config
from pathlib import Path
from typing import Optional

from app.common.tracing import ctx_command, ctx_seed, ctx_trace_id


# Adds additional ECS fields to the logger.
class ExtraFieldsFilter(logging.Filter):
    def filter(self, record):
        trace_id = ctx_trace_id.get("")
        command = ctx_command.get(None)
        seed = ctx_seed.get(None)

        if trace_id:
            record.trace = {"id": trace_id}

        labels = {}
        if command:
            labels["command"] = command
        if seed is not None:
            labels["seed"] = seed
        if labels:
            record.labels = labels
        return True


def configure_logging(path: Optional[str], level: Optional[str] = None) -> None:
    config_path = Path(path) if path else None
    if config_path and config_path.is_file():
        with config_path.open(encoding="utf-8") as f:
            logging.config.dictConfig(json.load(f))
    else:
        logging.basicConfig(
            level=logging.INFO,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )
    if level:
        logging.getLogger().setLevel(level.upper())
