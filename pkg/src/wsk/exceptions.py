"""Exception types raised across the package."""


class WSKError(Exception):
    """Base class for all errors raised by :mod:`wsk`."""


class DegenerateGridError(WSKError, ValueError):
    """A grid has too few points for the requested operation."""


class IncompatibleGridsError(WSKError, ValueError):
    """Two sampled functions live on different grids."""


class DomainError(WSKError, ValueError):
    """Data falls outside the domain a basis is defined on."""


class MissingDataError(WSKError, ValueError):
    """Required data (e.g. derivatives) was not supplied."""


class NumericError(WSKError, ArithmeticError):
    """Non-finite values or a failed numerical kernel."""


class BlowUpError(NumericError):
    """An ODE integration produced a non-finite state.

    Attributes
    ----------
    time : float
        First grid time at which a non-finite state was encountered.
    """

    def __init__(self, time, message=None):
        self.time = float(time)
        super().__init__(message or f"non-finite state encountered at t={self.time:g}")


class StabilityError(WSKError, ValueError):
    """An explicit scheme violates its stability limit.

    Attributes
    ----------
    required_dt : float
        Largest time step that satisfies the limit.
    """

    def __init__(self, required_dt, message):
        self.required_dt = float(required_dt)
        super().__init__(message)


class InsufficientDataError(WSKError, ValueError):
    """Too few points for a fit."""


class ConfigError(WSKError, ValueError):
    """Invalid experiment configuration.

    Attributes
    ----------
    field : str or None
        Name of the offending configuration key.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
