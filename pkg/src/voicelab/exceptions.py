"""Exception types shared across voicelab."""


class VoicelabError(Exception):
    """Base class for all library errors."""


class DomainError(VoicelabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(VoicelabError, ValueError):
    """Inconsistent parameters, mismatched grids or malformed configuration."""


class InadmissibleError(VoicelabError, ValueError):
    """An analyzing vector cannot be made admissible."""


class InvalidWeightError(VoicelabError, ValueError):
    """A weight evaluates to a non-positive value."""
