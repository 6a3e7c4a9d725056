# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
The electromagnetic side: cavity modes, coupling and the self-consistent IR field.

In the slowly varying approximation the IR mode amplitude obeys::

 de/dt + (κ + i(ωc − ω))e = i g² Σ_j σ32^j

so in steady state e = i g²⟨σ32(e)⟩/(κ + i(ωc − ω)). Because ⟨σ32⟩ itself
depends on e (through saturation of the IR transition) this is solved as a
damped fixed point iteration by :func:`self_consistent_ir()`, while the
optical drives stay clamped at their lasing values.
"""

# External dependencies.
import numpy
from property_manager import PropertyManager, lazy_property, mutable_property, required_property
from scipy import optimize
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import (
    ConvergenceError,
    RegimeError,
    ValidationError,
    coerce_nonnegative,
    coerce_positive,
)
from triwave.ensemble import quadrature_rule
from triwave.liouville import PacketParams, solve_packets
from triwave.units import (
    UNITS,
    DriveField,
    closed_loop_detunings,
    coupling_rate_squared,
    field_intensity,
    loss_cm_to_rate,
    photon_flux,
    rabi_to_field,
    wavenumber,
)

# Public identifiers that require documentation.
__all__ = (
    'CavityModeSpec',
    'CouplingConstant',
    'DriveSet',
    'IRSolution',
    'Medium',
    'clamp_drives',
    'coupling_g2',
    'logger',
    'manley_rowe_cap',
    'matched_ir_index',
    'mode_steady_field',
    'optical_photon_flux',
    'output_power',
    'phase_mismatch',
    'self_consistent_ir',
)

OSCILLATION_WINDOW = 10
"""Number of iterations over which the residual must decrease (an integer)."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class CavityModeSpec(PropertyManager):

    """A guided cavity mode."""

    def __init__(self, **kw):
        """Initialize a :class:`CavityModeSpec` object and validate it."""
        super(CavityModeSpec, self).__init__(**kw)
        coerce_positive(self.frequency, 'mode frequency')
        coerce_positive(self.kappa, 'mode decay rate')
        coerce_positive(self.index, 'refractive index')
        if not 0 < coerce_positive(self.confinement, 'confinement factor') <= 1:
            raise ValidationError("Confinement factor must be in (0, 1], got %r!" % self.confinement)

    @classmethod
    def from_loss(cls, frequency, loss, index, confinement, **kw):
        """
        Create a mode from an intensity loss in cm⁻¹.

        :param frequency: The mode frequency in meV.
        :param loss: The intensity loss 2κ in cm⁻¹.
        :param index: The modal refractive index.
        :param confinement: The confinement factor.
        :param kw: Any other properties of :class:`CavityModeSpec`.
        :returns: A :class:`CavityModeSpec` object.
        """
        kappa = loss_cm_to_rate(loss, frequency, index)
        return cls(frequency=frequency, kappa=kappa, index=index, confinement=confinement, **kw)

    @required_property
    def frequency(self):
        """The mode frequency ωc in meV."""

    @required_property
    def kappa(self):
        """The field decay rate κ in meV."""

    @required_property
    def confinement(self):
        """The confinement factor G."""

    @required_property
    def index(self):
        """The modal refractive index μ."""

    @mutable_property
    def wavenumber(self):
        """The longitudinal wavenumber kₓ in µm⁻¹ (defaults to μωc/ħc)."""
        return wavenumber(self.frequency, self.index)

    @mutable_property
    def volume(self):
        """The mode volume in µm³ (only reported, defaults to :data:`None`)."""


class CouplingConstant(PropertyManager):

    """The field-matter coupling of a cavity mode."""

    @required_property
    def density(self):
        """The density of electron states N in cm⁻³."""

    @required_property
    def dipole(self):
        """The transition dipole moment in e·nm."""

    @required_property
    def frequency(self):
        """The field frequency in meV."""

    @required_property
    def index(self):
        """The modal refractive index μ."""

    @required_property
    def confinement(self):
        """The confinement factor G."""

    @lazy_property
    def g2(self):
        """The coupling g² = 2πωd²NG/(ħμ²) in meV²."""
        return coupling_rate_squared(self.density, self.dipole, self.frequency, self.index, self.confinement)


class Medium(PropertyManager):

    """The active medium: level scheme, dipoles, relaxation and density."""

    @required_property
    def levels(self):
        """The :class:`~triwave.units.LevelScheme`."""

    @required_property
    def dipoles(self):
        """The :class:`~triwave.units.DipoleSet`."""

    @required_property
    def relaxation(self):
        """The :class:`~triwave.units.RelaxationSpec`."""

    @required_property
    def density(self):
        """The density of electron states N in cm⁻³."""


class DriveSet(PropertyManager):

    """The two optical drives and (optionally) their cavity modes."""

    def __init__(self, **kw):
        """Initialize a :class:`DriveSet` object and check the roles of the fields."""
        super(DriveSet, self).__init__(**kw)
        if self.optical1.role != 'optical-1' or self.optical2.role != 'optical-2':
            raise ValidationError("Drives must have the roles optical-1 and optical-2!")
        if not self.optical2.frequency > self.optical1.frequency:
            raise ValidationError("The second optical field must have the higher frequency!")

    @required_property
    def optical1(self):
        """The :class:`~triwave.units.DriveField` on 2↔1."""

    @required_property
    def optical2(self):
        """The :class:`~triwave.units.DriveField` on 3↔1."""

    @mutable_property
    def mode1(self):
        """The :class:`CavityModeSpec` of the first optical field (defaults to :data:`None`)."""

    @mutable_property
    def mode2(self):
        """The :class:`CavityModeSpec` of the second optical field (defaults to :data:`None`)."""

    @property
    def ir_frequency(self):
        """The difference frequency ω = ω2 − ω1 in meV."""
        return self.optical2.frequency - self.optical1.frequency

    def with_amplitudes(self, e1, e2):
        """
        Get a copy of this drive set with different Rabi amplitudes.

        :param e1: The new Rabi amplitude of the first field.
        :param e2: The new Rabi amplitude of the second field.
        :returns: A :class:`DriveSet` object.
        """
        return DriveSet(
            optical1=DriveField(role='optical-1', frequency=self.optical1.frequency,
                                rabi=e1, wavenumber=self.optical1.wavenumber),
            optical2=DriveField(role='optical-2', frequency=self.optical2.frequency,
                                rabi=e2, wavenumber=self.optical2.wavenumber),
            mode1=self.mode1,
            mode2=self.mode2,
        )


class IRSolution(PropertyManager):

    """The converged steady state of the IR mode."""

    @required_property
    def e(self):
        """The complex IR Rabi amplitude in meV."""

    @required_property
    def frequency(self):
        """The IR frequency ω in meV."""

    @required_property
    def intensity(self):
        """The intracavity IR intensity in W/cm²."""

    @required_property
    def photon_flux(self):
        """The IR photon flux density in s⁻¹cm⁻² (after the Manley-Rowe cap)."""

    @required_property
    def raw_photon_flux(self):
        """The IR photon flux density in s⁻¹cm⁻² before the cap."""

    @required_property
    def iterations(self):
        """The number of fixed point iterations."""

    @required_property
    def residual(self):
        """The relative fixed point residual of :attr:`e`."""

    @required_property
    def cap_applied(self):
        """:data:`True` when the Manley-Rowe cap limits :attr:`photon_flux`."""

    @required_property
    def g2(self):
        """The IR coupling g² in meV²."""

    @required_property
    def sigma32(self):
        """The ensemble averaged ⟨σ32⟩ at :attr:`e`."""

    @required_property
    def n23_min(self):
        """The smallest n23 at any packet (nonnegative means no inversion of the IR transition)."""

    @mutable_property
    def converged(self):
        """:data:`True` (solutions are only returned after convergence)."""
        return True

    @mutable_property
    def flags(self):
        """Diagnostics about the solution (a tuple of strings)."""
        return ()


def coupling_g2(density, dipole, frequency, index, confinement):
    """
    Calculate the coupling constant of a mode.

    :param density: The density of electron states N in cm⁻³.
    :param dipole: The transition dipole moment d in e·nm.
    :param frequency: The field frequency ω in meV.
    :param index: The modal refractive index μ.
    :param confinement: The confinement factor G.
    :returns: A :class:`CouplingConstant` object.
    :raises: :exc:`.ValidationError` when an input isn't positive.
    """
    return CouplingConstant(
        density=coerce_positive(density, 'density'),
        dipole=coerce_positive(dipole, 'dipole moment'),
        frequency=coerce_positive(frequency, 'frequency'),
        index=coerce_positive(index, 'refractive index'),
        confinement=coerce_positive(confinement, 'confinement factor'),
    )


def mode_steady_field(source, mode, omega):
    """
    Get the steady state amplitude of a driven cavity mode.

    :param source: The polarization source i g²⟨σ32⟩ in meV² (a complex number).
    :param mode: A :class:`CavityModeSpec` object.
    :param omega: The frequency of the polarization in meV.
    :returns: The complex Rabi amplitude source/(κ + i(ωc − ω)).
    """
    return source / (mode.kappa + 1j * (mode.frequency - omega))


def phase_mismatch(k1x, k2x, kx, length):
    """
    Check the phase matching of the IR mode to the nonlinear polarization wave.

    :param k1x: The wavenumber of the first optical mode in µm⁻¹.
    :param k2x: The wavenumber of the second optical mode in µm⁻¹.
    :param kx: The wavenumber of the IR mode in µm⁻¹.
    :param length: The device length in µm.
    :returns: A tuple ``(mismatch, matched)`` with Δk = kx − (k2x − k1x) and
              a boolean that is :data:`True` when |Δk|·L < π.
    """
    mismatch = kx - (k2x - k1x)
    return mismatch, bool(abs(mismatch) * length < numpy.pi)


def matched_ir_index(index1, omega1, index2, omega2, omega):
    """
    Get the IR modal index that phase matches the polarization wave.

    :returns: μ = (μ2ω2 − μ1ω1)/ω (a float).

    >>> from triwave.cavity import matched_ir_index
    >>> round(matched_ir_index(3.3, 1400.0, 3.3, 1495.0, 95.0), 12)
    3.3
    """
    return (index2 * omega2 - index1 * omega1) / coerce_positive(omega, 'frequency')


def self_consistent_ir(medium, drives, mode, broadening, damping=0.5, max_iterations=500,
                       tolerance=1e-10, floor=1e-14):
    """
    Solve for the steady state IR field with the full (saturating) medium response.

    :param medium: A :class:`Medium` object.
    :param drives: A :class:`DriveSet` object (the clamped optical fields).
    :param mode: The :class:`CavityModeSpec` of the IR mode.
    :param broadening: A :class:`~triwave.ensemble.BroadeningSpec` object.
    :param damping: The damping factor β of e ← (1 − β)e + βF(e).
    :param max_iterations: The maximum number of iterations.
    :param tolerance: The relative residual |F(e) − e|/max(|F(e)|, |e|, floor) to reach.
    :param floor: The absolute floor of the residual denominator in meV.
    :returns: An :class:`IRSolution` object.
    :raises: :exc:`.ConvergenceError` when the iteration doesn't converge, with
             a smaller damping factor suggested when the residual oscillates.
    """
    if not 0 < damping <= 1:
        raise ValidationError("Damping must be in (0, 1], got %r!" % damping)
    omega = drives.ir_frequency
    detunings = closed_loop_detunings(medium.levels, drives.optical1.frequency, drives.optical2.frequency, omega)
    g2 = coupling_g2(medium.density, medium.dipoles.d32, omega, mode.index, mode.confinement).g2
    params = PacketParams(
        detunings=detunings,
        relaxation=medium.relaxation,
        e1=drives.optical1.rabi,
        e2=drives.optical2.rabi,
    )
    rule = quadrature_rule(broadening, params, holes=broadening.refine and broadening.kind != 'homogeneous')
    shifts = broadening.shifts(rule.nodes)

    def evaluate(e):
        states = solve_packets(params.replace(e=e), shifts)
        average = complex(numpy.dot(rule.weights, states.sigma32))
        return mode_steady_field(1j * g2 * average, mode, omega), average, states

    e = 0j
    history = []
    for iteration in range(1, max_iterations + 1):
        image, average, states = evaluate(e)
        residual = abs(image - e) / max(abs(image), abs(e), floor)
        history.append(residual)
        logger.debug("Iteration %i: |e| = %.6g meV, residual = %.3g", iteration, abs(e), residual)
        if residual < tolerance:
            return _solution(e, omega, g2, average, states, iteration, residual, medium, drives, mode)
        if len(history) > 2 * OSCILLATION_WINDOW and residual > history[-OSCILLATION_WINDOW - 1]:
            raise ConvergenceError(
                "IR field iteration oscillates (residual %.3g after %i iterations)" % (residual, iteration),
                residual=residual, iterations=iteration, oscillating=True, suggested_damping=damping / 2,
            )
        e = (1 - damping) * e + damping * image
    raise ConvergenceError(
        "IR field iteration didn't converge in %i iterations (residual %.3g)" % (max_iterations, history[-1]),
        residual=history[-1], iterations=max_iterations,
    )


def manley_rowe_cap(flux_ir, flux1, flux2):
    """
    Limit the IR photon flux to one IR photon per optical photon.

    :param flux_ir: The IR photon flux.
    :param flux1: The photon flux of the first optical field.
    :param flux2: The photon flux of the second optical field.
    :returns: A tuple ``(flux, applied)`` with min(flux_ir, flux1, flux2) and
              a boolean that is :data:`True` when the cap binds.
    :raises: :exc:`.ValidationError` when a flux is negative.

    >>> from triwave.cavity import manley_rowe_cap
    >>> manley_rowe_cap(5e20, 2e20, 3e20)
    (2e+20, True)
    """
    flux_ir = coerce_nonnegative(flux_ir, 'IR photon flux')
    bound = min(coerce_nonnegative(flux1, 'optical photon flux'), coerce_nonnegative(flux2, 'optical photon flux'))
    if flux_ir > bound:
        return bound, True
    return flux_ir, False


def output_power(solution, mode, facet_area, outcoupling):
    """
    Estimate the IR output power.

    :param solution: An :class:`IRSolution` object.
    :param mode: The :class:`CavityModeSpec` of the IR mode (validated, the
                 frequency is taken from the solution).
    :param facet_area: The area of the output facet in µm².
    :param outcoupling: The fraction of the intracavity flux that leaves
                        through the facet (between 0 and 1).
    :returns: The power in mW (a float).
    """
    if not 0 <= outcoupling <= 1:
        raise ValidationError("Out-coupling fraction must be in [0, 1], got %r!" % outcoupling)
    area = coerce_positive(facet_area, 'facet area') * 1e-8
    watts = solution.photon_flux * solution.frequency * UNITS.millielectronvolt * area * outcoupling
    return watts * 1e3


def optical_photon_flux(drive, dipole, index):
    """
    Get the photon flux density of an optical drive.

    :param drive: A :class:`~triwave.units.DriveField` object.
    :param dipole: The dipole moment of the driven transition in e·nm.
    :param index: The modal refractive index.
    :returns: The flux in s⁻¹cm⁻² (a float).
    """
    intensity = field_intensity(rabi_to_field(drive.rabi, dipole), index)
    return photon_flux(intensity, drive.frequency)


def clamp_drives(medium, drives, broadening):
    """
    Find the optical amplitudes at which both optical modes are gain clamped.

    :param medium: A :class:`Medium` object.
    :param drives: A :class:`DriveSet` whose :attr:`~DriveSet.mode1` and
                   :attr:`~DriveSet.mode2` are set. The phases of its Rabi
                   amplitudes are kept, the magnitudes serve as the initial
                   guess when nonzero.
    :param broadening: A :class:`~triwave.ensemble.BroadeningSpec` object.
    :returns: A :class:`DriveSet` with the clamped amplitudes.
    :raises: :exc:`.RegimeError` when a mode is below threshold or when the
             two modes can't lase together, :exc:`.ConvergenceError` when
             the root finder fails.

    The modal gain of the first field is Re(i g1²⟨σ21⟩/e1). The IR field is
    neglected while clamping (it's assumed weak).

    Both modes share the population of level 1, so they compete. Each mode is
    first clamped on its own and the small-signal gain of the other mode is
    evaluated in that state. Joint clamping exists when each mode can grow in
    the presence of the other one. When only one of the modes can do so the
    other one is suppressed (only one optical field lases) and when neither can
    the two single-mode states are both stable (bistability). In those cases
    there's no state with both fields clamped and :exc:`.RegimeError` is raised.
    """
    if drives.mode1 is None or drives.mode2 is None:
        raise ValidationError("Gain clamping requires the cavity modes of both optical fields!")
    omega1, omega2 = drives.optical1.frequency, drives.optical2.frequency
    detunings = closed_loop_detunings(medium.levels, omega1, omega2, omega2 - omega1)
    couplings = (
        coupling_g2(medium.density, medium.dipoles.d21, omega1, drives.mode1.index, drives.mode1.confinement).g2,
        coupling_g2(medium.density, medium.dipoles.d31, omega2, drives.mode2.index, drives.mode2.confinement).g2,
    )
    losses = numpy.array([drives.mode1.kappa, drives.mode2.kappa])
    phases = [numpy.exp(1j * numpy.angle(d.rabi)) for d in (drives.optical1, drives.optical2)]
    rule = quadrature_rule(broadening, PacketParams(detunings=detunings, relaxation=medium.relaxation))
    shifts = broadening.shifts(rule.nodes)

    def gains(magnitudes):
        e1, e2 = magnitudes[0] * phases[0], magnitudes[1] * phases[1]
        states = solve_packets(PacketParams(detunings=detunings, relaxation=medium.relaxation, e1=e1, e2=e2), shifts)
        return numpy.array([
            (1j * couplings[0] * numpy.dot(rule.weights, states.sigma21) / e1).real,
            (1j * couplings[1] * numpy.dot(rule.weights, states.sigma31) / e2).real,
        ])

    rates = medium.relaxation
    seed = 1e-6 * min(rates.gamma21, rates.gamma31)
    small_signal = gains([seed, seed])
    below = [i + 1 for i in range(2) if not small_signal[i] > losses[i]]
    if below:
        msg = "Optical mode(s) %s below threshold (small signal gain %s meV vs. loss %s meV)!"
        raise RegimeError(msg % (below, small_signal.tolist(), losses.tolist()))
    alone = [_clamp_single(gains, losses, i, seed) for i in range(2)]
    # Net small-signal gain of each mode in the state clamped by the other one.
    invasion = [gains(alone[1])[0] / losses[0], gains(alone[0])[1] / losses[1]]
    logger.verbose("Single mode clamps |e1| = %.6g meV and |e2| = %.6g meV, gain/loss of the other mode %.4f and %.4f.",
                   alone[0][0], alone[1][1], invasion[0], invasion[1])
    if invasion[0] <= 1 and invasion[1] <= 1:
        msg = "Optical modes are bistable, only one of them lases at a time (gain/loss of the other mode %.4f, %.4f)!"
        raise RegimeError(msg % tuple(invasion))
    for index in range(2):
        if invasion[index] <= 1:
            msg = "Only optical mode %i lases, mode %i stays below threshold in its presence (gain/loss %.4f)!"
            raise RegimeError(msg % (2 - index, index + 1, invasion[index]))
    single = numpy.log([alone[0][0], alone[1][1]])
    candidates = [single, single - numpy.log(2)]
    if drives.optical1.rabi and drives.optical2.rabi:
        candidates.insert(0, numpy.log([abs(drives.optical1.rabi), abs(drives.optical2.rabi)]))
    for attempt, start in enumerate(candidates, start=1):
        solution = optimize.root(lambda y: gains(numpy.exp(y)) / losses - 1, start, method='hybr')
        if solution.success:
            break
        logger.debug("Joint clamping attempt %i failed: %s", attempt, solution.message)
    else:
        raise ConvergenceError("Gain clamping failed: %s" % solution.message,
                               residual=float(numpy.max(numpy.abs(solution.fun))), iterations=solution.nfev)
    magnitudes = numpy.exp(solution.x)
    logger.verbose("Clamped optical amplitudes: |e1| = %.6g meV, |e2| = %.6g meV.", *magnitudes)
    return drives.with_amplitudes(complex(magnitudes[0] * phases[0]), complex(magnitudes[1] * phases[1]))


def _clamp_single(gains, losses, index, seed, limit=1e6):
    """Clamp one optical mode while the other one is off, returns both magnitudes."""
    def excess(y):
        magnitudes = [seed, seed]
        magnitudes[index] = numpy.exp(y)
        return gains(magnitudes)[index] / losses[index] - 1

    upper, steps = numpy.log(seed), 0
    while excess(upper) > 0:
        upper += numpy.log(4)
        steps += 1
        if upper > numpy.log(limit):
            raise ConvergenceError("Optical mode %i doesn't saturate below %g meV!" % (index + 1, limit),
                                   residual=float(excess(upper)), iterations=steps)
    y = optimize.brentq(excess, upper - numpy.log(4), upper, xtol=1e-12)
    magnitudes = [seed, seed]
    magnitudes[index] = float(numpy.exp(y))
    return magnitudes


def _solution(e, omega, g2, average, states, iterations, residual, medium, drives, mode):
    intensity = field_intensity(rabi_to_field(e, medium.dipoles.d32), mode.index)
    raw = photon_flux(intensity, omega)
    indices = [m.index if m is not None else mode.index for m in (drives.mode1, drives.mode2)]
    flux, applied = manley_rowe_cap(
        raw,
        optical_photon_flux(drives.optical1, medium.dipoles.d21, indices[0]),
        optical_photon_flux(drives.optical2, medium.dipoles.d31, indices[1]),
    )
    flags = []
    if applied:
        flags.append("Manley-Rowe cap applied")
    unphysical = numpy.count_nonzero(~numpy.asarray(states.physical))
    if unphysical:
        flags.append("%i packet(s) violate positivity" % unphysical)
        logger.warning("%i packet state(s) violate positivity of the density matrix.", unphysical)
    logger.verbose("Converged IR field after %i iteration(s): |e| = %.6g meV.", iterations, abs(e))
    return IRSolution(
        e=complex(e),
        frequency=omega,
        intensity=intensity,
        photon_flux=flux,
        raw_photon_flux=raw,
        iterations=iterations,
        residual=residual,
        cap_applied=applied,
        g2=g2,
        sigma32=average,
        n23_min=float(numpy.min(states.n23)),
        flags=tuple(flags),
    )
