"""Timestamp-gated action execution with an injectable latency model."""

from .stream import (
    DEFAULT_SLACK,
    STALL_HORIZONS,
    ExecutionLog,
    LogEntry,
    execute_stream,
    replay_verdicts,
)
from .types import LatencyModel, TimedAction

__all__ = [
    "DEFAULT_SLACK", "STALL_HORIZONS", "ExecutionLog", "LogEntry",
    "execute_stream", "replay_verdicts", "LatencyModel", "TimedAction",
]
