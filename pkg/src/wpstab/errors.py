"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the domain where a quantity is defined."""


class RingMismatchError(ValueError):
    """Operands live in different cohomology rings."""


class ConfigError(ValueError):
    """A scenario or data file failed validation.

    ``path`` names the offending field (dotted), when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
