"""Exception hierarchy for qtele."""


class QteleError(Exception):
    """Base class for all qtele errors."""


class DomainError(QteleError, ValueError):
    """Input outside the mathematical domain of an operation."""


class RangeError(QteleError, ValueError):
    """Parameter outside its permitted range."""


class ConfigurationError(QteleError, ValueError):
    """Profiles or channel settings violate a normalization constraint."""


class UnsupportedFormError(QteleError, ValueError):
    pass


class PayloadError(QteleError, ValueError):
    pass


class EncodeError(PayloadError):
    pass


class ParseError(PayloadError):
    """Malformed or non-canonical payload bytes."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ValidationError(PayloadError):
    """Well-formed payload whose values are out of range."""


class InconsistentStatisticsError(QteleError):
    """Measured statistics admit no solution under the supplied key."""
