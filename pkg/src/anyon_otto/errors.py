"""Exception hierarchy shared across the package."""


class AnyonOttoError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AnyonOttoError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NoConvergence(AnyonOttoError, RuntimeError):
    """A truncated sum failed to reach the requested tolerance within its caps."""


class OrderingError(AnyonOttoError, ValueError):
    """Quantum-number pair given in the wrong order (requires n1 <= n2)."""


class ShapeError(AnyonOttoError, ValueError):
    """Mismatched list lengths where a common label set is required."""


class DegenerateCycle(AnyonOttoError, ArithmeticError):
    """Cycle efficiency is 0/0: hot and cold strokes are indistinguishable."""


class ConfigError(AnyonOttoError, ValueError):
    """Invalid or incomplete run configuration (CLI exit code 64)."""
