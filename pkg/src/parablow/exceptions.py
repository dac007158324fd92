"""Exception types raised by the package."""


class ParablowError(Exception):
    """Base class for package errors."""


class NonFiniteField(ParablowError, FloatingPointError):
    """A right-hand side produced NaN or inf samples."""


class NegativePower(ParablowError, ValueError):
    """A negative power of a possibly vanishing field would be required."""


class UnsupportedExponent(ParablowError, ValueError):
    """Exponent lies in (1, 2), where the reduction at x = 0 is ill-defined."""


class NoClosedForm(ParablowError, ValueError):
    """The requested case has no closed form or usable envelope."""


class NotApplicable(ParablowError, ValueError):
    """The check does not apply to the given run (e.g. convective runs)."""


class InsufficientGrowth(ParablowError, ValueError):
    """The trace does not grow enough to fit a blow-up law."""


class DegreeBudgetExceeded(ParablowError, ValueError):
    """Test-function degree too high to dealias on the configured grid."""


class NegativeOmega(ParablowError, ValueError):
    """Synthesised initial omega dips below zero."""


class ConfigError(ParablowError, ValueError):
    """Invalid configuration file or value."""
