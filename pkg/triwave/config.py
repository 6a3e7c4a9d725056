# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Parsing of scenario configuration files.

Scenario files are line oriented, every line holds one ``section.key = value``
assignment and the character ``#`` starts a comment that runs until the end
of the line. For example:

.. code-block:: ini

   # Mid-infrared scenario with a broadened optical line.
   broadening.kind = gaussian
   broadening.u21 = 70      # meV
   ir.loss = 150 cm-1

Every key that isn't given gets its default from :data:`SCHEMA`, and each
defaulted key is reported once (at the NOTICE level) so that a scenario's
provenance is visible in its log. Unknown keys, duplicate keys, syntax errors
and values out of range raise :exc:`.ConfigError` with the offending line
number(s).
"""

# Standard library modules.
import re

# External dependencies.
import numpy
from humanfriendly import coerce_boolean
from humanfriendly.text import format, pluralize
from property_manager import PropertyManager, lazy_property, mutable_property, required_property
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import ConfigError, ValidationError, coerce_loss

# Public identifiers that require documentation.
__all__ = (
    'ConfigEntry',
    'ConfigKey',
    'SCHEMA',
    'ScenarioConfig',
    'SweepSpec',
    'logger',
    'parse_config',
    'parse_lines',
)

KEY_PATTERN = re.compile(r'^[a-z][a-z0-9_]*\.[a-z][a-z0-9_]*$')
"""Compiled regular expression that matches a valid dotted key."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class ConfigKey(PropertyManager):

    """The schema of a single configuration key."""

    @required_property
    def name(self):
        """The dotted name of the key (a string)."""

    @required_property
    def kind(self):
        """The type of the value: ``float``, ``int``, ``bool``, ``choice`` or ``loss``."""

    @mutable_property
    def default(self):
        """The default value (:data:`None` means derived from other keys)."""

    @mutable_property
    def unit(self):
        """The unit of the value (a string, empty for dimensionless values)."""
        return ''

    @mutable_property
    def minimum(self):
        """The smallest allowed value (a number or :data:`None`)."""

    @mutable_property
    def maximum(self):
        """The largest allowed value (a number or :data:`None`)."""

    @mutable_property
    def exclusive(self):
        """:data:`True` when :attr:`minimum` itself isn't allowed."""
        return False

    @mutable_property
    def choices(self):
        """The allowed values of a ``choice`` key (a tuple of strings)."""
        return ()

    @mutable_property
    def description(self):
        """A short description of the key (a string)."""
        return ''

    @property
    def numeric(self):
        """:data:`True` when the key can be swept."""
        return self.kind in ('float', 'loss')

    def convert(self, text):
        """
        Convert and range check a value.

        :param text: The value as it appears in a configuration file (a
                     string) or an already typed value.
        :returns: The typed value.
        :raises: :exc:`~exceptions.ValueError` when the value is malformed or out of range.
        """
        if self.kind == 'bool':
            return coerce_boolean(text)
        if self.kind == 'choice':
            if text not in self.choices:
                raise ValueError(format("expected one of %s, got %r", ", ".join(self.choices), text))
            return text
        if self.kind == 'loss':
            value, unit = coerce_loss(text)
            self.check_range(value)
            return value, unit
        value = int(text) if self.kind == 'int' else float(text)
        if not numpy.isfinite(value):
            raise ValueError(format("expected a finite number, got %r", text))
        self.check_range(value)
        return value

    def check_range(self, value):
        """Raise :exc:`~exceptions.ValueError` when `value` is out of range."""
        if self.minimum is not None:
            if value < self.minimum or (self.exclusive and value == self.minimum):
                relation = ">" if self.exclusive else ">="
                raise ValueError(format("expected a value %s %s, got %r", relation, self.minimum, value))
        if self.maximum is not None and value > self.maximum:
            raise ValueError(format("expected a value <= %s, got %r", self.maximum, value))

    def render(self, value):
        """Render a typed value the way it would appear in a configuration file."""
        if value is None:
            return "(derived)"
        if self.kind == 'loss':
            return "%s %s" % (repr(value[0]), value[1])
        if self.kind == 'bool':
            return "true" if value else "false"
        return value if isinstance(value, str) else repr(value)


def _key(name, kind, default, unit='', **kw):
    return name, ConfigKey(name=name, kind=kind, default=default, unit=unit, **kw)


SCHEMA = dict((
    _key('levels.e1', 'float', 0.0, 'meV', description="Energy of level 1 (holes)"),
    _key('levels.e2', 'float', 1400.0, 'meV', description="Energy of level 2"),
    _key('levels.e3', 'float', 1495.372, 'meV', description="Energy of level 3 (IR near 13 µm)"),
    _key('dipoles.d21', 'float', 0.5, 'e·nm', minimum=0, exclusive=True, description="Dipole of 2↔1"),
    _key('dipoles.d31', 'float', 0.5, 'e·nm', minimum=0, exclusive=True, description="Dipole of 3↔1"),
    _key('dipoles.d32', 'float', 2.0, 'e·nm', minimum=0, exclusive=True, description="Dipole of 3↔2"),
    _key('relaxation.gamma21', 'float', 7.0, 'meV', minimum=0, description="Decay of σ21"),
    _key('relaxation.gamma31', 'float', 7.0, 'meV', minimum=0, description="Decay of σ31"),
    _key('relaxation.gamma32', 'float', 7.0, 'meV', minimum=0, description="Decay of σ32"),
    _key('relaxation.r21', 'float', 7.0, 'meV', minimum=0, description="Population relaxation 2→1"),
    _key('relaxation.r31', 'float', 7.0, 'meV', minimum=0, description="Population relaxation 3→1"),
    _key('relaxation.r32', 'float', 7.0, 'meV', minimum=0, description="Population relaxation 3→2"),
    _key('relaxation.pump', 'float', 28.0, 'meV', minimum=0, description="Incoherent pump 1→3"),
    _key('medium.density', 'float', 1e18, 'cm⁻³', minimum=0, exclusive=True, description="Density of states N"),
    _key('broadening.kind', 'choice', 'homogeneous', choices=('homogeneous', 'gaussian', 'lorentzian'),
         description="Shape of the inhomogeneous line"),
    _key('broadening.u21', 'float', 0.0, 'meV', minimum=0, description="Inhomogeneous width of 2↔1"),
    _key('broadening.u32', 'float', 0.0, 'meV', minimum=0, description="Inhomogeneous width of 3↔2"),
    _key('broadening.u31', 'float', None, 'meV', minimum=0, description="Inhomogeneous width of 3↔1 (u21 + u32)"),
    _key('broadening.nodes', 'int', 129, minimum=17, description="Nodes of the base quadrature rule"),
    _key('broadening.cutoff', 'float', 5.0, minimum=5, description="Integration range in units of u"),
    _key('broadening.refine', 'bool', True, description="Refine the quadrature across spectral holes"),
    _key('optical1.frequency', 'float', None, 'meV', minimum=0, exclusive=True,
         description="Frequency ω1 (defaults to the 2↔1 line center)"),
    _key('optical1.loss', 'loss', (150.0, 'cm-1'), 'cm-1 or meV', minimum=0,
         description="Intensity loss 2κ1 (cm-1) or decay rate κ1 (meV)"),
    _key('optical1.confinement', 'float', 0.1, minimum=0, exclusive=True, maximum=1, description="Confinement G1"),
    _key('optical1.index', 'float', 3.3, minimum=0, exclusive=True, description="Modal index μ1"),
    _key('optical2.frequency', 'float', None, 'meV', minimum=0, exclusive=True,
         description="Frequency ω2 (defaults to the 3↔1 line center)"),
    _key('optical2.loss', 'loss', (150.0, 'cm-1'), 'cm-1 or meV', minimum=0,
         description="Intensity loss 2κ2 (cm-1) or decay rate κ2 (meV)"),
    _key('optical2.confinement', 'float', 0.1, minimum=0, exclusive=True, maximum=1, description="Confinement G2"),
    _key('optical2.index', 'float', 3.3, minimum=0, exclusive=True, description="Modal index μ2"),
    _key('ir.frequency', 'float', None, 'meV', minimum=0, exclusive=True,
         description="IR cavity mode frequency ωc (defaults to ω2 − ω1)"),
    _key('ir.loss', 'loss', (150.0, 'cm-1'), 'cm-1 or meV', minimum=0,
         description="Intensity loss 2κ (cm-1) or decay rate κ (meV)"),
    _key('ir.confinement', 'float', 0.1, minimum=0, exclusive=True, maximum=1, description="Confinement G"),
    _key('ir.index', 'float', 3.3, minimum=0, exclusive=True, description="Modal index μ"),
    _key('device.facet_area', 'float', 20.0, 'µm²', minimum=0, exclusive=True, description="Output facet area"),
    _key('device.outcoupling', 'float', 0.3, minimum=0, maximum=1, description="Out-coupled fraction"),
    _key('device.length', 'float', 1000.0, 'µm', minimum=0, exclusive=True, description="Device length L"),
    _key('drives.mode', 'choice', 'fixed', choices=('fixed', 'clamp'),
         description="Use the given drive amplitudes or clamp them at the optical losses"),
    _key('drives.e1', 'float', 1.0, 'meV', minimum=0, description="Rabi amplitude |e1|"),
    _key('drives.e2', 'float', 1.0, 'meV', minimum=0, description="Rabi amplitude |e2|"),
    _key('drives.phase1', 'float', 0.0, 'rad', description="Phase of e1"),
    _key('drives.phase2', 'float', 0.0, 'rad', description="Phase of e2"),
    _key('solver.damping', 'float', 0.5, minimum=0, exclusive=True, maximum=1, description="Damping β"),
    _key('solver.max_iterations', 'int', 500, minimum=1, description="Iteration limit"),
    _key('solver.tolerance', 'float', 1e-10, minimum=0, exclusive=True, description="Relative residual"),
    _key('solver.absolute_floor', 'float', 1e-14, 'meV', minimum=0, exclusive=True,
         description="Floor of the residual denominator"),
))
"""
The configuration schema (a dictionary of :class:`ConfigKey` objects by name).

The defaults form the canonical mid-infrared scenario that's also shipped
as ``scenarios/canonical.conf``: a quantum well like medium assembled from
typical values (d32 = 2 e·nm, d21 = d31 = 0.5 e·nm, γ = 7 meV, N = 10¹⁸ cm⁻³,
intensity losses of 150 cm⁻¹, G = 0.1, λ_IR ≈ 13 µm). These are
representative values, not measurements.
"""


class ConfigEntry(PropertyManager):

    """Container for the results of :func:`parse_lines()`."""

    @mutable_property
    def filename(self):
        """The name of the configuration file from which this entry was parsed (a string or :data:`None`)."""

    @mutable_property
    def line_number(self):
        """The line number from which this entry was parsed (an integer)."""

    @mutable_property
    def key(self):
        """The dotted key (a string)."""

    @mutable_property
    def value(self):
        """The value as written (a string)."""


class ScenarioConfig(PropertyManager):

    """A fully typed and defaulted scenario configuration."""

    @required_property
    def values(self):
        """A dictionary with the typed value of every key in :data:`SCHEMA`."""

    @mutable_property
    def defaulted_keys(self):
        """The keys that took their default value (a tuple of strings)."""
        return ()

    @mutable_property
    def filename(self):
        """The name of the file the configuration was read from (a string or :data:`None`)."""

    def __getitem__(self, key):
        """Get the typed value of a dotted key."""
        return self.values[key]

    def replace(self, key, value):
        """
        Get a copy of this configuration with one value replaced.

        :param key: The dotted key (a string).
        :param value: The new value (typed, or a number for loss keys which
                      keeps the unit of the current value).
        :returns: A :class:`ScenarioConfig` object.
        :raises: :exc:`.ConfigError` when the key is unknown or the value out of range.
        """
        if key not in SCHEMA:
            raise ConfigError("Unknown configuration key %r!" % key)
        schema = SCHEMA[key]
        if schema.kind == 'loss' and not isinstance(value, (str, tuple)):
            value = "%r %s" % (float(value), self.values[key][1])
        elif schema.kind == 'loss' and isinstance(value, tuple):
            value = "%r %s" % value
        try:
            converted = schema.convert(value)
        except (ValueError, ValidationError) as e:
            raise ConfigError("Invalid value for %s: %s" % (key, e))
        values = dict(self.values)
        values[key] = converted
        # A defaulted u31 follows the other two widths.
        if key in ('broadening.u21', 'broadening.u32') and 'broadening.u31' in self.defaulted_keys:
            values['broadening.u31'] = values['broadening.u21'] + values['broadening.u32']
        return ScenarioConfig(
            values=values,
            defaulted_keys=tuple(k for k in self.defaulted_keys if k != key),
            filename=self.filename,
        )

    @lazy_property
    def rendered(self):
        """The configuration rendered as text (a string, one line per key in schema order)."""
        return "".join("%s = %s\n" % (k, SCHEMA[k].render(self.values[k])) for k in SCHEMA)


class SweepSpec(PropertyManager):

    """A one dimensional parameter sweep."""

    def __init__(self, **kw):
        """Initialize a :class:`SweepSpec` object and validate it."""
        super(SweepSpec, self).__init__(**kw)
        if self.key not in SCHEMA:
            raise ValidationError("Can't sweep unknown key %r!" % self.key)
        if not SCHEMA[self.key].numeric:
            raise ValidationError("Can't sweep non-numeric key %r!" % self.key)
        if not (isinstance(self.steps, int) and self.steps >= 2):
            raise ValidationError("A sweep needs at least two steps, got %r!" % self.steps)
        self.start, self.stop = float(self.start), float(self.stop)
        if self.log and not (self.start > 0 and self.stop > 0):
            raise ValidationError("A logarithmic sweep needs positive endpoints!")

    @required_property
    def key(self):
        """The dotted key to sweep (a string)."""

    @required_property
    def start(self):
        """The first value (a number)."""

    @required_property
    def stop(self):
        """The last value (a number)."""

    @required_property
    def steps(self):
        """The number of values (an integer of at least two)."""

    @mutable_property
    def log(self):
        """:data:`True` for logarithmic spacing (defaults to :data:`False`)."""
        return False

    def values(self):
        """
        Get the swept values.

        :returns: A list of floats in sweep order.
        """
        if self.log:
            return [float(v) for v in numpy.geomspace(self.start, self.stop, self.steps)]
        return [float(v) for v in numpy.linspace(self.start, self.stop, self.steps)]


def parse_lines(text, filename=None):
    """
    Tokenize a scenario configuration.

    :param text: The contents of the configuration (a string).
    :param filename: The name of the file the text was read from (a string or :data:`None`).
    :returns: A generator of :class:`ConfigEntry` objects.
    :raises: :exc:`.ConfigError` on syntax errors.

    This function strips comments (the character ``#`` until the end of
    the line) and splits each remaining line on its first ``=``.
    """
    for line_number, line in enumerate(text.splitlines(), start=1):
        # Strip comments.
        line = re.sub('#.*', '', line).strip()
        if not line:
            continue
        key, separator, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not separator:
            raise ConfigError("Expected `section.key = value', got %r!" % line, line_numbers=[line_number])
        if not KEY_PATTERN.match(key):
            raise ConfigError("Malformed key %r (expected section.key)!" % key, line_numbers=[line_number])
        if not value:
            raise ConfigError("Missing value for %s!" % key, line_numbers=[line_number])
        yield ConfigEntry(filename=filename, line_number=line_number, key=key, value=value)


def parse_config(text, filename=None):
    """
    Parse a scenario configuration.

    :param text: The contents of the configuration (a string).
    :param filename: The name of the file the text was read from (a string or :data:`None`).
    :returns: A :class:`ScenarioConfig` object.
    :raises: :exc:`.ConfigError` on syntax errors, unknown keys, duplicate
             keys and values that are malformed or out of range.
    """
    seen = {}
    values = {}
    for entry in parse_lines(text, filename):
        if entry.key in seen:
            raise ConfigError("Duplicate key %s!" % entry.key, line_numbers=[seen[entry.key], entry.line_number])
        seen[entry.key] = entry.line_number
        if entry.key not in SCHEMA:
            raise ConfigError("Unknown key %s!" % entry.key, line_numbers=[entry.line_number])
        try:
            values[entry.key] = SCHEMA[entry.key].convert(entry.value)
        except (ValueError, ValidationError) as e:
            raise ConfigError("Invalid value for %s: %s" % (entry.key, e), line_numbers=[entry.line_number])
    defaulted = []
    for key, schema in SCHEMA.items():
        if key not in values:
            values[key] = schema.default
            defaulted.append(key)
            logger.notice("Using default for %s: %s", key, schema.render(schema.default))
    if values['broadening.u31'] is None:
        values['broadening.u31'] = values['broadening.u21'] + values['broadening.u32']
    if values['broadening.kind'] != 'homogeneous' and not values['broadening.u21'] > 0:
        raise ConfigError(
            "broadening.kind = %s requires a positive broadening.u21!" % values['broadening.kind'],
            line_numbers=[n for k, n in sorted(seen.items()) if k in ('broadening.kind', 'broadening.u21')],
        )
    logger.verbose("Parsed %s (%s given, %s defaulted).",
                   filename or "configuration",
                   pluralize(len(seen), "key"),
                   pluralize(len(defaulted), "key"))
    return ScenarioConfig(values=values, defaulted_keys=tuple(defaulted), filename=filename)
