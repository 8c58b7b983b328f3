"""Exception types shared across the package."""


class StganError(Exception):
    """Base class for all library errors."""


class SpecError(StganError, ValueError):
    """An argument, layer spec, or configuration violates its contract."""


class ShapeError(StganError, ValueError):
    """Array dimensions do not line up at runtime."""


class StateError(StganError, RuntimeError):
    """An object is used in the wrong state (wrong mode, foreign cache, ...)."""


class DataError(StganError, ValueError):
    """A data file or data array has invalid content."""


class NumericError(StganError, ArithmeticError):
    """Training produced NaN/inf values."""
