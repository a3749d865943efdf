"""Exception hierarchy shared by every module of the package."""


class TDHOError(Exception):
    """Base class for all errors raised by :mod:`tdho`."""


class ConfigError(TDHOError, ValueError):
    """Invalid construction parameters or a malformed configuration document."""


class DomainError(TDHOError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ParameterError(DomainError):
    """Model parameters for which a closed form does not exist."""


class ConstantsError(TDHOError, ValueError):
    """Pinney composition constants violate the Wronskian constraint."""


class UsageError(TDHOError, ValueError):
    """Incompatible operands, e.g. wave fields on different grids."""


class NumericError(TDHOError, ArithmeticError):
    """A numerical procedure produced non-finite values or failed."""


class ConvergenceError(NumericError):
    """An adaptive procedure could not reach the requested tolerance."""


class SingularityError(NumericError):
    """The Ermakov-Pinney amplitude collapsed towards zero."""


class ConsistencyError(NumericError):
    """Inputs are mutually inconsistent beyond floating-point noise."""
