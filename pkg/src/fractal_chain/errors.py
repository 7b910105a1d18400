"""Exception hierarchy shared by all modules."""


class FractalChainError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(FractalChainError, ValueError):
    """A parameter lies outside its admissible domain."""


class RegimeError(ParameterError):
    """The requested diagnostic is meaningless for these parameters."""


class GeometryError(FractalChainError, ValueError):
    """A planar graph is degenerate, or an estimate leaves its valid range."""


class ProtocolError(FractalChainError, ValueError):
    """The caller did not follow the measurement protocol (too few scales, too short a run...)."""


class NumericError(FractalChainError, ArithmeticError):
    """Non-finite values appeared in an input or a computed state."""


class DivergenceError(NumericError):
    """The integration blew up.

    ``step_index`` is the 1-based index of the offending step and ``trajectory``
    holds whatever was recorded before the failure (``None`` when raised from
    a single step).
    """

    def __init__(self, message, step_index, trajectory=None):
        super().__init__(message)
        self.step_index = step_index
        self.trajectory = trajectory


class PoorFitError(FractalChainError):
    """A least-squares fit left a residual above the acceptance threshold."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class FormatError(FractalChainError, ValueError):
    """An input file does not follow the documented format."""
