# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Units, physical constants and the shared domain types.

Internally the package uses a unit system with ħ = 1 in which energies, rates
and Rabi amplitudes are all expressed in meV, lengths in µm, carrier densities
in cm⁻³ and dipole moments in e·nm. Losses quoted in cm⁻¹ are converted once,
at the boundary, by :func:`loss_cm_to_rate()`. Raw electric field strengths
only show up in reporting (:func:`rabi_to_field()` and friends).

All objects defined here are treated as immutable once constructed and all
functions are pure, so they can be shared freely between threads.
"""

# Standard library modules.
import cmath

# External dependencies.
from property_manager import PropertyManager, lazy_property, mutable_property, required_property
from scipy import constants

# Modules included in our package.
from triwave import ValidationError, coerce_nonnegative, coerce_positive

# Public identifiers that require documentation.
__all__ = (
    'DRIVE_ROLES',
    'DipoleSet',
    'DriveField',
    'LevelScheme',
    'RelaxationSpec',
    'UNITS',
    'UnitTable',
    'closed_loop_detunings',
    'coupling_rate_squared',
    'energy_from_wavelength',
    'field_intensity',
    'field_to_rabi',
    'loss_cm_to_rate',
    'photon_flux',
    'rabi_to_field',
    'rate_to_loss_cm',
    'wavelength_from_energy',
    'wavenumber',
)

DRIVE_ROLES = ('optical-1', 'optical-2', 'ir')
"""
The roles a :class:`DriveField` can play (a tuple of strings).

``optical-1`` drives the 2↔1 transition, ``optical-2`` drives the 3↔1
transition and ``ir`` is the generated field on the 3↔2 transition.
"""

LOOP_TOLERANCE = 1e-12
"""Relative tolerance of the three-photon resonance check (a float)."""


class UnitTable(PropertyManager):

    """
    Conversion constants between the internal units and SI.

    Every constant is derived from :mod:`scipy.constants` so that the
    conversions in both directions are exact inverses of each other (up to
    floating point rounding).
    """

    @lazy_property
    def millielectronvolt(self):
        """One meV expressed in joule (a float)."""
        return 1e-3 * constants.e

    @lazy_property
    def angular_frequency(self):
        """The angular frequency (rad/s) corresponding to 1 meV/ħ (about 1.519267×10¹²)."""
        return self.millielectronvolt / constants.hbar

    @lazy_property
    def wavelength_energy_product(self):
        """The product λ·E in µm·meV (about 1239.84)."""
        return constants.h * constants.c / self.millielectronvolt * 1e6

    @lazy_property
    def hbar_c(self):
        """ħc in meV·µm (about 197.327)."""
        return constants.hbar * constants.c / self.millielectronvolt * 1e6

    @lazy_property
    def dipole(self):
        """One e·nm expressed in C·m (a float)."""
        return constants.e * 1e-9

    def meV_to_angular(self, energy):
        """Convert an energy (meV) to an angular frequency (rad/s)."""
        return energy * self.angular_frequency

    def angular_to_meV(self, omega):
        """Convert an angular frequency (rad/s) to an energy (meV)."""
        return omega / self.angular_frequency

    def loss_to_rate(self, alpha, index):
        """Convert an intensity loss (cm⁻¹) to an amplitude decay rate (meV)."""
        return alpha * 1e2 * constants.c / (2.0 * index) / self.angular_frequency

    def rate_to_loss(self, kappa, index):
        """Convert an amplitude decay rate (meV) to an intensity loss (cm⁻¹)."""
        return kappa * self.angular_frequency * 2.0 * index / constants.c / 1e2


UNITS = UnitTable()
"""The :class:`UnitTable` shared by the whole package."""


class LevelScheme(PropertyManager):

    """
    The three-level energy skeleton of the active medium.

    Level 1 is the lowest (hole) level, levels 2 and 3 are the electron
    levels. The optical fields drive the interband transitions 2↔1 and 3↔1
    and the infrared field lives on the intersubband transition 3↔2.
    """

    def __init__(self, **kw):
        """Initialize a :class:`LevelScheme` object and check that the levels are ordered."""
        super(LevelScheme, self).__init__(**kw)
        if not (self.e3 > self.e2 > self.e1):
            msg = "Level energies must satisfy E3 > E2 > E1, got E1=%r, E2=%r, E3=%r!"
            raise ValidationError(msg % (self.e1, self.e2, self.e3))

    @required_property
    def e1(self):
        """The energy of level 1 in meV (a float)."""

    @required_property
    def e2(self):
        """The energy of level 2 in meV (a float)."""

    @required_property
    def e3(self):
        """The energy of level 3 in meV (a float)."""

    @lazy_property
    def omega21(self):
        """The 2↔1 transition frequency in meV."""
        return self.e2 - self.e1

    @lazy_property
    def omega32(self):
        """The 3↔2 transition frequency in meV."""
        return self.e3 - self.e2

    @lazy_property
    def omega31(self):
        """
        The 3↔1 transition frequency in meV.

        Computed as :attr:`omega21` + :attr:`omega32` so the loop closes exactly.
        """
        return self.omega21 + self.omega32


class DipoleSet(PropertyManager):

    """Transition dipole moments of the three transitions (in e·nm)."""

    def __init__(self, **kw):
        """Initialize a :class:`DipoleSet` object, all dipoles must be allowed."""
        super(DipoleSet, self).__init__(**kw)
        for name in ('d21', 'd31', 'd32'):
            coerce_positive(getattr(self, name), name)

    @required_property
    def d21(self):
        """The dipole moment of the 2↔1 (first optical) transition."""

    @required_property
    def d31(self):
        """The dipole moment of the 3↔1 (second optical) transition."""

    @required_property
    def d32(self):
        """The dipole moment of the 3↔2 (infrared) transition."""


class RelaxationSpec(PropertyManager):

    """
    Phenomenological relaxation and pumping rates (all in meV).

    The coherence decay rates :attr:`gamma21`, :attr:`gamma31` and
    :attr:`gamma32` may exceed half the sum of the population decay rates
    (pure dephasing is allowed). Population relaxation uses three channels
    (3→2, 3→1 and 2→1) and the incoherent bipolar injection is collapsed onto
    a single pump channel from level 1 to level 3, which conserves the trace.
    """

    def __init__(self, **kw):
        """Initialize a :class:`RelaxationSpec` object, rejecting negative rates."""
        super(RelaxationSpec, self).__init__(**kw)
        for name in self.rate_names:
            coerce_nonnegative(getattr(self, name), name)

    @required_property
    def gamma21(self):
        """Decay rate of the 2↔1 coherence."""

    @required_property
    def gamma31(self):
        """Decay rate of the 3↔1 coherence."""

    @required_property
    def gamma32(self):
        """Decay rate of the 3↔2 coherence."""

    @mutable_property
    def r21(self):
        """Population relaxation rate of the 2→1 channel (defaults to 0)."""
        return 0.0

    @mutable_property
    def r31(self):
        """Population relaxation rate of the 3→1 channel (defaults to 0)."""
        return 0.0

    @mutable_property
    def r32(self):
        """Population relaxation rate of the 3→2 channel (defaults to 0)."""
        return 0.0

    @mutable_property
    def pump(self):
        """Incoherent pump rate Λ from level 1 to level 3 (defaults to 0)."""
        return 0.0

    @property
    def rate_names(self):
        """The names of all rates (a tuple of strings)."""
        return ('gamma21', 'gamma31', 'gamma32', 'r21', 'r31', 'r32', 'pump')


class DriveField(PropertyManager):

    """A coherent field expressed by its complex Rabi amplitude e = d𝓔/2ħ."""

    def __init__(self, **kw):
        """Initialize a :class:`DriveField` object and validate its attributes."""
        super(DriveField, self).__init__(**kw)
        self.rabi = complex(self.rabi)
        if not cmath.isfinite(self.rabi):
            raise ValidationError("Rabi amplitude must be finite, got %r!" % self.rabi)
        coerce_positive(self.frequency, 'frequency')
        if self.role not in DRIVE_ROLES:
            msg = "Unsupported drive role %r (expected one of %s)!"
            raise ValidationError(msg % (self.role, ", ".join(DRIVE_ROLES)))

    @required_property
    def role(self):
        """The transition driven by this field (one of the strings in :data:`DRIVE_ROLES`)."""

    @required_property
    def frequency(self):
        """The carrier frequency ω in meV (a positive float)."""

    @mutable_property
    def rabi(self):
        """The complex Rabi amplitude in meV (defaults to 0)."""
        return 0j

    @mutable_property
    def wavenumber(self):
        """The longitudinal wavenumber kₓ in µm⁻¹ (defaults to 0)."""
        return 0.0

    def detuning(self, levels):
        """
        Get the detuning of this field from the transition it drives.

        :param levels: A :class:`LevelScheme` object.
        :returns: Δ = ω_ik − ω in meV (a float, the sign convention of
                  :func:`closed_loop_detunings()`). The IR role is measured against
                  the 3↔2 transition.
        """
        transition = dict(zip(DRIVE_ROLES, (levels.omega21, levels.omega31, levels.omega32)))
        return transition[self.role] - self.frequency


def wavelength_from_energy(energy):
    """
    Convert a photon energy to a vacuum wavelength.

    :param energy: The photon energy in meV (a positive number).
    :returns: The vacuum wavelength in µm (a float).
    :raises: :exc:`.ValidationError` when `energy` isn't positive.

    >>> from triwave.units import wavelength_from_energy
    >>> round(wavelength_from_energy(98), 2)
    12.65
    """
    return UNITS.wavelength_energy_product / coerce_positive(energy, 'energy')


def energy_from_wavelength(wavelength):
    """
    Convert a vacuum wavelength to a photon energy.

    :param wavelength: The vacuum wavelength in µm (a positive number).
    :returns: The photon energy in meV (a float).
    :raises: :exc:`.ValidationError` when `wavelength` isn't positive.
    """
    return UNITS.wavelength_energy_product / coerce_positive(wavelength, 'wavelength')


def loss_cm_to_rate(alpha, omega, index):
    """
    Convert an intensity loss to the field decay rate κ of the mode equation.

    :param alpha: The intensity loss in cm⁻¹ (a nonnegative number).
    :param omega: The mode frequency in meV (a positive number).
    :param index: The modal refractive index (a positive number).
    :returns: The amplitude decay rate κ in meV (a float).
    :raises: :exc:`.ValidationError` when an argument is out of range.

    The field amplitude decays at half the intensity rate, so κ = αc/(2μ) and a
    quoted intensity loss α corresponds to 2κ. The frequency only enters
    through the dispersion of `index`, which the caller has already evaluated
    at `omega`, so it's validated but otherwise unused.
    """
    alpha = coerce_nonnegative(alpha, 'loss')
    coerce_positive(omega, 'frequency')
    index = coerce_positive(index, 'refractive index')
    return UNITS.loss_to_rate(alpha, index)


def rate_to_loss_cm(kappa, index):
    """
    Convert a field decay rate back to an intensity loss.

    :param kappa: The amplitude decay rate in meV (a nonnegative number).
    :param index: The modal refractive index (a positive number).
    :returns: The intensity loss in cm⁻¹ (a float).
    """
    kappa = coerce_nonnegative(kappa, 'decay rate')
    index = coerce_positive(index, 'refractive index')
    return UNITS.rate_to_loss(kappa, index)


def wavenumber(omega, index):
    """
    Get the longitudinal wavenumber kₓ = μω/c of a guided mode.

    :param omega: The frequency in meV (a positive number).
    :param index: The modal refractive index (a positive number).
    :returns: The wavenumber in µm⁻¹ (a float).
    """
    return coerce_positive(index, 'refractive index') * coerce_positive(omega, 'frequency') / UNITS.hbar_c


def closed_loop_detunings(levels, omega1, omega2, omega):
    """
    Get the rotating-frame detunings of the three transitions.

    :param levels: A :class:`LevelScheme` object.
    :param omega1: The frequency of the field on 2↔1 (meV).
    :param omega2: The frequency of the field on 3↔1 (meV).
    :param omega: The frequency of the field on 3↔2 (meV).
    :returns: A tuple ``(delta21, delta31, delta32)`` in meV with
              Δ21 = ω21 − ω1, Δ32 = ω32 − (ω2 − ω1) and Δ31 = Δ21 + Δ32.
    :raises: :exc:`.ValidationError` when ω ≠ ω2 − ω1 (the rotating frame
             only exists at three-photon resonance).
    """
    difference = omega2 - omega1
    if abs(omega - difference) > LOOP_TOLERANCE * max(abs(omega), abs(omega2), 1.0):
        msg = "Three-photon resonance violated: omega=%r but omega2 - omega1=%r!"
        raise ValidationError(msg % (omega, difference))
    delta21 = levels.omega21 - omega1
    delta32 = levels.omega32 - difference
    return delta21, delta21 + delta32, delta32


def coupling_rate_squared(density, dipole, omega, index, confinement):
    """
    Evaluate the field-matter coupling g² = 2πωd²NG/(ħμ²).

    :param density: The volume density of electron states N in cm⁻³.
    :param dipole: The transition dipole moment in e·nm.
    :param omega: The field frequency in meV.
    :param index: The modal refractive index μ.
    :param confinement: The confinement factor G.
    :returns: g² in meV² (a float).

    The Gaussian-units expression equals ωd²NG/(2ε₀ħμ²) in SI, which is what
    is evaluated here before converting s⁻² to meV².
    """
    omega_si = UNITS.meV_to_angular(omega)
    dipole_si = dipole * UNITS.dipole
    density_si = density * 1e6
    rate = omega_si * dipole_si ** 2 * density_si * confinement
    rate /= 2 * constants.epsilon_0 * constants.hbar * index ** 2
    return rate / UNITS.angular_frequency ** 2


def rabi_to_field(rabi, dipole):
    """
    Convert a Rabi amplitude to the field amplitude 𝓔 = 2ħe/d.

    :param rabi: The (complex) Rabi amplitude in meV.
    :param dipole: The transition dipole moment in e·nm.
    :returns: The field amplitude in V/m (same type as `rabi`).
    """
    return 2 * rabi * UNITS.millielectronvolt / (dipole * UNITS.dipole)


def field_to_rabi(field, dipole):
    """
    Convert a field amplitude (V/m) to a Rabi amplitude e = d𝓔/2ħ (meV).

    :param field: The (complex) field amplitude in V/m.
    :param dipole: The transition dipole moment in e·nm.
    :returns: The Rabi amplitude in meV.
    """
    return field * dipole * UNITS.dipole / (2 * UNITS.millielectronvolt)


def field_intensity(field, index):
    """
    Get the intensity I = ½cε₀μ|𝓔|² of a guided field.

    :param field: The (complex) field amplitude in V/m.
    :param index: The refractive index μ.
    :returns: The intensity in W/cm² (a float).
    """
    return 0.5 * constants.c * constants.epsilon_0 * index * abs(field) ** 2 * 1e-4


def photon_flux(intensity, omega):
    """
    Get the photon flux density carried by an intensity.

    :param intensity: The intensity in W/cm².
    :param omega: The photon energy in meV.
    :returns: The photon flux density in s⁻¹cm⁻² (a float).
    """
    return intensity / (coerce_positive(omega, 'frequency') * UNITS.millielectronvolt)
