"""Shared exception taxonomy."""


class ImlwError(Exception):
    """Base class for all workbench errors."""


class ConfigurationError(ImlwError):
    """Mismatched or invalid configuration (task/case mismatch, unknown rule, bad schema)."""


class PlacementError(ImlwError):
    """Could not place objects without overlap within the retry budget."""


class CommandError(ImlwError):
    """Rejected arm command (non-finite or out of limits)."""


class SchemaError(ImlwError):
    """Serialized payload does not match the expected schema."""


class TruncatedPayloadError(ImlwError):
    """Serialized payload ended early."""


class DataError(ImlwError):
    """Dataset-level failure (empty dataset, id collision, config mismatch)."""


class DimensionError(ImlwError):
    """Array shape mismatch in the numeric core."""


class NumericError(ImlwError):
    """Non-finite values encountered (diverged sampling or training)."""


class PlanningError(ImlwError):
    """Scripted expert could not produce a plan for the given world."""


class StallError(ImlwError):
    """Deployment discarded every action for too many consecutive horizons."""
