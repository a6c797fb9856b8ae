import contextvars
import uuid
from contextlib import contextmanager
from logging import getLogger
from typing import Optional

logger = getLogger(__name__)

ctx_trace_id = contextvars.ContextVar("trace_id")
ctx_command = contextvars.ContextVar("command")
ctx_seed = contextvars.ContextVar("seed")


# Each CLI invocation gets a trace id so every log line of one run can be
# followed together. The id only reaches the logs, never a result document.
@contextmanager
def trace_run(command: str, seed: Optional[int] = None, trace_id: Optional[str] = None):
    tokens = [
        ctx_trace_id.set(trace_id or uuid.uuid4().hex),
        ctx_command.set(command),
        ctx_seed.set(seed),
    ]
    try:
        yield ctx_trace_id.get()
    finally:
        for var, token in zip((ctx_trace_id, ctx_command, ctx_seed), tokens):
            var.reset(token)
