"""Teleoperation gateway: wire schema, deterministic session core, WS server."""

from .server import DEFAULT_PORT, GatewayServer, serve
from .session import GatewaySession
from .wire import (
    CLIENT_TYPES,
    SERVER_TYPES,
    WIRE_SCHEMA,
    ack_message,
    error_message,
    validate_client_message,
)

__all__ = [
    "DEFAULT_PORT", "GatewayServer", "serve", "GatewaySession",
    "CLIENT_TYPES", "SERVER_TYPES", "WIRE_SCHEMA",
    "ack_message", "error_message", "validate_client_message",
]
