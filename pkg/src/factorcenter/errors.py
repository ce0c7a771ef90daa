class FactorCenterError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(FactorCenterError, ValueError):
    """Input violates a documented precondition."""


class ResourceError(FactorCenterError, RuntimeError):
    """A configured size cap would be exceeded."""
