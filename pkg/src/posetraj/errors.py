"""Exception types shared across the package."""


class PosetrajError(Exception):
    """Base class for all package errors."""


class DomainError(PosetrajError):
    """An argument is outside the operation's documented domain."""


class BehindCamera(PosetrajError):
    """A point's camera-frame depth is <= the near threshold; it cannot be imaged."""


class InvalidOverride(PosetrajError):
    """Sampler override bounds are empty, inverted, or malformed."""


class ImageMismatch(PosetrajError):
    """Image dimensions or channel count do not match what the operation needs."""


class ShapeMismatch(PosetrajError):
    """Two array/track arguments do not have matching shapes."""


class EmptyInput(PosetrajError):
    """An input collection is empty where at least one element is required."""


class DegenerateObject(PosetrajError):
    """Object extents are too small to normalize."""


class CameraMiss(PosetrajError):
    """Scene rejected: the object center could not be kept imageable."""


class MissingCamera(PosetrajError):
    """Camera-finetune conditioning requested without a camera pose."""


class UnexpectedCamera(PosetrajError):
    """Pretraining conditioning received a camera pose it must not use."""


class NonFinite(PosetrajError):
    """A numeric input is NaN or infinite."""


class ParseError(PosetrajError):
    """A file could not be parsed; the message names the offending location."""


class SchemaVersionError(PosetrajError):
    """A file declares a schema version this code does not support."""


class ConfigError(PosetrajError):
    """Configuration file or override is invalid."""
