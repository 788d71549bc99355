"""Wire schema "imlw-wire-1": JSON text frames with a seq counter per message."""

from __future__ import annotations

import math

WIRE_SCHEMA = "imlw-wire-1"

CLIENT_TYPES = {"hello", "control", "record_start", "record_stop", "save",
                "discard", "list_tasks"}
SERVER_TYPES = {"hello", "state", "error", "ack", "list_tasks"}

_CONTROL_FIELDS = ("vx", "vy", "vyaw", "pwm_target")


def validate_client_message(msg: object) -> str | None:
    """Returns an error string for malformed messages, None when valid."""
    if not isinstance(msg, dict):
        return "message must be a JSON object"
    mtype = msg.get("type")
    if mtype not in CLIENT_TYPES:
        return f"unknown message type: {mtype!r}"
    if not isinstance(msg.get("seq"), int):
        return "missing integer seq"
    if mtype == "control":
        for name in _CONTROL_FIELDS:
            v = msg.get(name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                return f"control field {name} must be a finite number"
        if not isinstance(msg.get("clutch"), bool):
            return "control field clutch must be a boolean"
    if mtype == "save" and not isinstance(msg.get("outcome"), bool):
        return "save requires boolean outcome"
    return None


def error_message(seq: int, detail: str) -> dict:
    return {"type": "error", "seq": seq, "error": detail}


def ack_message(seq: int, **extra) -> dict:
    return {"type": "ack", "seq": seq, **extra}
