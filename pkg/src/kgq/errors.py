"""Exception types shared across the package."""


class KgqError(Exception):
    """Base class for every error this package raises on bad input."""


class ParseError(KgqError):
    """A file could not be read as the expected format (bad JSON, bad line)."""


class ValidationError(KgqError):
    """Well-formed input that violates the data contract."""


class UnparsableQuestion(KgqError):
    """Question tokens that cannot be compiled into query triplets."""
