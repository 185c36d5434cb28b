"""Exception hierarchy shared by every mclwalk module."""


class MCLError(Exception):
    """Base class for all library errors."""


class DimensionError(MCLError, ValueError):
    pass


class ValidationError(MCLError, ValueError):
    pass


class ParameterError(MCLError, ValueError):
    pass


class DegenerateInputError(MCLError, ValueError):
    pass


class NumericalError(MCLError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    """Raised when an iterative solver exhausts its iteration budget."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class FormatError(MCLError, ValueError):
    """Malformed or unsupported episode file."""


class IllConditionedWarning(RuntimeWarning):
    pass
