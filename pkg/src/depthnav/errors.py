"""Exception hierarchy shared by all depthnav modules."""


class DepthNavError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(DepthNavError):
    """A parameter or configuration value is out of its documented range."""


class PreconditionError(DepthNavError):
    """An operation was called with inputs violating its preconditions."""


class FormatError(DepthNavError):
    """A persisted file does not match its documented format."""


class BadMagicError(FormatError):
    """Stream file does not start with the DNV1 magic."""


class TruncatedStreamError(FormatError):
    """Stream file ends before the byte count promised by its header."""


class GenerationError(DepthNavError):
    """Procedural scene generation failed to satisfy its constraints."""


class ProtocolError(DepthNavError):
    """A session client sent a malformed or out-of-order message."""
