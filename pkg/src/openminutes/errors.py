"""Exception types shared across the package."""


class OpenMinutesError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(OpenMinutesError):
    """Input data violates a documented invariant.

    ``fields`` optionally maps field names to messages for API error bodies.
    """

    def __init__(self, message: str, fields: dict[str, str] | None = None):
        super().__init__(message)
        self.fields = fields or {}


class ConfigError(OpenMinutesError):
    """Invalid configuration (bad template, missing setting)."""


class ParseError(OpenMinutesError):
    """Normalized minute file could not be parsed.

    ``line`` is 1-based when the error is tied to a specific line.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class ExtractionInvalidError(OpenMinutesError):
    """Extractor output failed schema validation after retries.

    Carries the offending layer and the raw response for operator review.
    """

    def __init__(self, layer: str, message: str, raw_response: str = ""):
        super().__init__(message)
        self.layer = layer
        self.raw_response = raw_response


class TransportError(OpenMinutesError):
    """Remote service unreachable after the configured retries."""


class IntegrityError(OpenMinutesError):
    """A change-set would break referential integrity."""


class NotFoundError(OpenMinutesError):
    """Referenced record does not exist."""


class LifecycleError(OpenMinutesError):
    """Illegal minute status transition. Carries the current status."""

    def __init__(self, message: str, current_status: str):
        super().__init__(message)
        self.current_status = current_status


class StoreLockedError(OpenMinutesError):
    """Another writer holds the store lock."""


class LoadError(OpenMinutesError):
    """Persisted data could not be loaded (corrupt file or record)."""
