"""Exception types raised across the package."""


class TrigspecError(Exception):
    """Base class for all package errors."""


class GridError(TrigspecError, ValueError):
    """Invalid partition or grid parameters."""


class ExprSyntaxError(TrigspecError, ValueError):
    """Malformed expression text; ``pos`` is the 0-based character offset."""

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        where = f" at offset {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class ExprDomainError(TrigspecError, ArithmeticError):
    """Expression undefined at the requested point (division by zero, sqrt of a negative, ...)."""


class SingularMatrixError(TrigspecError, ArithmeticError):
    """A matrix that must be invertible is numerically singular."""


class ConvergenceError(TrigspecError, RuntimeError):
    """An iterative kernel failed to converge."""


class ConfigError(TrigspecError, ValueError):
    """Problem configuration failed validation; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        self.field = field
        prefix = f"{field}: " if field else ""
        super().__init__(prefix + message)
