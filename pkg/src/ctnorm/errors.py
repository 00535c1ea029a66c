"""Exception types raised by ctnorm."""


class CtnormError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(CtnormError):
    pass


class DimensionCapError(CtnormError):
    """Raised when a state would exceed the configured dense-size cap."""


class InvalidStateError(CtnormError):
    pass


class InvalidCutoffError(CtnormError):
    pass


class ParameterDomainError(CtnormError):
    pass


class NumericalIntegrityError(CtnormError):
    """A quantity that must be real or non-negative is not, beyond tolerance.

    Usually means a non-Hermitian or otherwise inconsistent matrix reached
    the numerics.
    """
