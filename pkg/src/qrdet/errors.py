"""Exception types shared across the engines."""


class ResourceLimitError(RuntimeError):
    """An engine refused a computation that would exceed its size limits."""


class PrecisionError(RuntimeError):
    """A floating-point recovery step could not certify its result."""


class ConsistencyError(RuntimeError):
    """Two internal routes that must agree produced different values."""
