"""Exception types raised by the library."""


class InputShapeError(ValueError):
    """Array length or grid mismatch between operands."""


class ResolutionError(ValueError):
    """A requested mode or norm is not representable on the grid."""


class ParameterError(ValueError):
    """An index or numerical parameter is outside its admissible range."""


class ConfigError(ValueError):
    """An experiment configuration violates its constraints."""


class NumericalOverflowError(ArithmeticError):
    """The time integrator produced non-finite values."""
