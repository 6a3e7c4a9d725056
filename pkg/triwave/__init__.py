# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Steady-state simulation of three-color generation in semiconductor lasers.

The :mod:`triwave` module contains the exception hierarchy and the generic
coercion functions used by the other modules in the package.
"""

# Standard library modules.
import math
import numbers

# Public identifiers that require documentation.
__all__ = (
    'ConfigError',
    'ConvergenceError',
    'DegenerateParametersError',
    'LOSS_UNITS',
    'NumericalError',
    'RegimeError',
    'SingularityError',
    'TriwaveError',
    'ValidationError',
    '__version__',
    'coerce_loss',
    'coerce_nonnegative',
    'coerce_positive',
)

__version__ = '0.1'
"""Semi-standard module versioning."""

LOSS_UNITS = ('cm-1', 'meV')
"""The units in which cavity losses can be expressed (a tuple of strings)."""


class TriwaveError(Exception):

    """Base class for all exceptions raised by the :mod:`triwave` package."""


class ValidationError(TriwaveError, ValueError):

    """Raised when inputs violate a documented domain constraint or contract."""


class ConfigError(ValidationError):

    """Raised when a scenario configuration can't be parsed or validated."""

    def __init__(self, message, line_numbers=()):
        """
        Initialize a :class:`ConfigError` object.

        :param message: The error message (a string).
        :param line_numbers: The line numbers involved (a tuple of integers).
        """
        self.line_numbers = tuple(line_numbers)
        if self.line_numbers:
            prefix = "line %s" % ", ".join(str(n) for n in self.line_numbers)
            message = "%s: %s" % (prefix, message)
        super(ConfigError, self).__init__(message)


class RegimeError(ValidationError):

    """Raised when the scale separation required by an asymptotic result doesn't hold."""


class NumericalError(TriwaveError, ArithmeticError):

    """Base class for failures of the numerical machinery."""


class DegenerateParametersError(NumericalError):

    """Raised when a steady-state system is singular or too ill-conditioned to solve."""

    def __init__(self, message, rates=(), index=None):
        """
        Initialize a :class:`DegenerateParametersError` object.

        :param message: The error message (a string).
        :param rates: The names of the rates responsible (a tuple of strings).
        :param index: The position of the worst system in a batch (an integer or :data:`None`).
        """
        self.rates = tuple(rates)
        self.index = index
        if self.rates:
            message = "%s (offending rates: %s)" % (message, ", ".join(self.rates))
        super(DegenerateParametersError, self).__init__(message)


class SingularityError(NumericalError):

    """Raised when a closed-form denominator vanishes exactly."""


class ConvergenceError(NumericalError):

    """Raised when the self-consistent field iteration doesn't converge."""

    def __init__(self, message, residual, iterations, oscillating=False, suggested_damping=None):
        """
        Initialize a :class:`ConvergenceError` object.

        :param message: The error message (a string).
        :param residual: The last relative fixed-point residual (a float).
        :param iterations: The number of iterations performed (an integer).
        :param oscillating: :data:`True` when the residual stopped decreasing.
        :param suggested_damping: A smaller damping factor to try (a float or :data:`None`).
        """
        self.residual = residual
        self.iterations = iterations
        self.oscillating = oscillating
        self.suggested_damping = suggested_damping
        if suggested_damping is not None:
            message = "%s (try solver.damping = %s)" % (message, suggested_damping)
        super(ConvergenceError, self).__init__(message)


def coerce_positive(value, name='value'):
    """
    Coerce a value to a strictly positive finite float.

    :param value: The value to coerce (a number or a numeric string).
    :param name: The name of the quantity (used in error messages).
    :returns: A float greater than zero.
    :raises: :exc:`ValidationError` when `value` isn't a positive finite number.
    """
    number = _coerce_float(value, name)
    if not number > 0:
        msg = "Expected %s to be positive, got %r instead!"
        raise ValidationError(msg % (name, value))
    return number


def coerce_nonnegative(value, name='value'):
    """
    Coerce a value to a nonnegative finite float.

    :param value: The value to coerce (a number or a numeric string).
    :param name: The name of the quantity (used in error messages).
    :returns: A float greater than or equal to zero.
    :raises: :exc:`ValidationError` when `value` is negative or not a finite number.
    """
    number = _coerce_float(value, name)
    if number < 0:
        msg = "Expected %s to be nonnegative, got %r instead!"
        raise ValidationError(msg % (name, value))
    return number


def coerce_loss(value, unit='cm-1'):
    """
    Coerce a cavity loss to a number and a unit.

    :param value: The loss (a number or a string like ``150 cm-1`` or ``0.45 meV``).
    :param unit: The unit assumed when `value` is a bare number (one of
                 the strings in :data:`LOSS_UNITS`).
    :returns: A tuple with two values:

              1. The magnitude of the loss (a nonnegative float).
              2. The unit of the loss (a string).
    :raises: :exc:`ValidationError` when `value` can't be parsed or uses an
             unsupported unit.

    Intensity losses are usually quoted in inverse centimeters while the
    equations of motion use amplitude decay rates in meV, this function keeps
    track of which one the caller had in mind:

    >>> from triwave import coerce_loss
    >>> coerce_loss('150 cm-1')
    (150.0, 'cm-1')
    >>> coerce_loss(0.45, unit='meV')
    (0.45, 'meV')
    """
    if isinstance(value, str):
        # humanfriendly.text.tokenize() would split `cm-1' on its digit.
        tokens = value.split()
        if len(tokens) not in (1, 2):
            msg = "Failed to parse loss expression! (%r)"
            raise ValidationError(msg % value)
        if len(tokens) == 2:
            unit = tokens[1]
        value = tokens[0]
    if unit not in LOSS_UNITS:
        msg = "Unsupported loss unit %r (supported units are %s)!"
        raise ValidationError(msg % (unit, ", ".join(LOSS_UNITS)))
    return coerce_nonnegative(value, 'loss'), unit


def _coerce_float(value, name):
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            msg = "Expected %s to be a number, got %r instead!"
            raise ValidationError(msg % (name, value))
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        msg = "Expected %s to be a real number, got %r instead!"
        raise ValidationError(msg % (name, value))
    number = float(value)
    if not math.isfinite(number):
        msg = "Expected %s to be finite, got %r instead!"
        raise ValidationError(msg % (name, value))
    return number
