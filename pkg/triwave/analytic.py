# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Closed-form expressions for the generated infrared field.

The weak-field solution of the density matrix equations gives the IR Rabi
amplitude as a sum over packets (:func:`eq6_ir_field()`). Eliminating the
populations with the gain clamping condition of the two optical lasers turns
that sum into simple expressions in terms of cavity losses and confinement
factors:

- :func:`eq7_ir_field_homogeneous()` for a homogeneously broadened medium,
- :func:`eq10a_eq11_inhomogeneous()` for an inhomogeneously broadened medium
  driven below saturation,
- :func:`eq13_ir_field_holeburning()` for an inhomogeneously broadened medium
  driven far above saturation (spectral hole burning).

Gain clamping means that each optical mode's modal gain equals its loss:
κ1 = g1²·⟨Re(iσ21/e1)⟩ = −g1²·n12·⟨Re(1/Γ21)⟩ to leading order in the drives,
so n12 = −κ1/(g1²⟨Re 1/Γ21⟩) and likewise for n13 (see
:func:`gain_clamped_populations()`). The ratio between the IR coupling and an
optical coupling is (ω/ω1)(d²/d1²)(G/G1) (equal modal indices), which is where
the loss/confinement ratios in the closed forms come from.

Validity gates never raise: they are reported as flags on
:class:`ClosedFormResult`. The hole burning form is the exception, its
derivation assumptions are structural so violating them raises
:exc:`.ValidationError`.
"""

# External dependencies.
import numpy
from property_manager import PropertyManager, lazy_property, mutable_property, required_property
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import ValidationError, coerce_loss, coerce_nonnegative, coerce_positive
from triwave.units import UNITS, rabi_to_field

# Public identifiers that require documentation.
__all__ = (
    'AnalyticContext',
    'ClosedFormResult',
    'HOLEBURNING_COEFFICIENTS',
    'eq10a_eq11_inhomogeneous',
    'eq11_intensity_ratio',
    'eq13_ir_field_holeburning',
    'eq6_ensemble_field',
    'eq6_ir_field',
    'eq7_ir_field_homogeneous',
    'eta_parameter',
    'gain_clamped_populations',
    'gamma_factors',
    'logger',
    'saturation_scale',
)

HOLEBURNING_COEFFICIENTS = (0.9, 0.1)
"""The two bracket coefficients of the hole burning closed form (a tuple of floats)."""

REGIME_RATIO = 10
"""The scale separation required by the inhomogeneous closed forms (an integer)."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class AnalyticContext(PropertyManager):

    """
    The parameters that enter the closed forms.

    Frequencies, decay rates, widths and Rabi amplitudes are in meV, dipoles
    in e·nm. The cavity decay rates only enter through ratios so any unit
    works as long as :attr:`kappa`, :attr:`kappa1` and :attr:`kappa2` agree.
    """

    def __init__(self, **kw):
        """Initialize an :class:`AnalyticContext` object and validate it."""
        super(AnalyticContext, self).__init__(**kw)
        for name in ('omega', 'omega1', 'omega2', 'd', 'd1', 'd2', 'kappa', 'kappa1', 'kappa2'):
            coerce_positive(getattr(self, name), name)
        for name in ('G', 'G1', 'G2'):
            value = coerce_positive(getattr(self, name), name)
            if value > 1:
                raise ValidationError("Confinement factor %s must not exceed 1, got %r!" % (name, value))
        for name in ('gamma21', 'gamma31', 'gamma32', 'u21', 'u31', 'u32'):
            coerce_nonnegative(getattr(self, name), name)
        if abs(self.omega - (self.omega2 - self.omega1)) > 1e-9 * self.omega2:
            msg = "Frequencies must close the loop (omega = omega2 - omega1), got %r != %r - %r!"
            raise ValidationError(msg % (self.omega, self.omega2, self.omega1))
        delta21, delta31, delta32 = self.detunings
        if abs(delta31 - delta21 - delta32) > 1e-9 * max(1.0, abs(delta21), abs(delta32)):
            raise ValidationError("Detunings violate the loop identity!")
        self.e1, self.e2 = complex(self.e1), complex(self.e2)

    @required_property
    def omega(self):
        """The IR frequency ω."""

    @required_property
    def omega1(self):
        """The frequency ω1 of the field on 2↔1."""

    @required_property
    def omega2(self):
        """The frequency ω2 of the field on 3↔1."""

    @required_property
    def d(self):
        """The IR dipole moment d32."""

    @required_property
    def d1(self):
        """The dipole moment d21."""

    @required_property
    def d2(self):
        """The dipole moment d31."""

    @required_property
    def kappa(self):
        """The decay rate of the IR mode."""

    @required_property
    def kappa1(self):
        """The decay rate of the first optical mode."""

    @required_property
    def kappa2(self):
        """The decay rate of the second optical mode."""

    @required_property
    def G(self):
        """The confinement factor of the IR mode."""

    @required_property
    def G1(self):
        """The confinement factor of the first optical mode."""

    @required_property
    def G2(self):
        """The confinement factor of the second optical mode."""

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
    def u21(self):
        """Inhomogeneous width of 2↔1 (defaults to 0)."""
        return 0.0

    @mutable_property
    def u32(self):
        """Inhomogeneous width of 3↔2 (defaults to 0)."""
        return 0.0

    @mutable_property
    def u31(self):
        """Inhomogeneous width of 3↔1 (defaults to u21 + u32)."""
        return self.u21 + self.u32

    @mutable_property
    def detunings(self):
        """The detunings ``(Δ21, Δ31, Δ32)`` of the fields from the line centers (defaults to zero)."""
        return (0.0, 0.0, 0.0)

    @required_property
    def e1(self):
        """The complex Rabi amplitude of the first optical field."""

    @required_property
    def e2(self):
        """The complex Rabi amplitude of the second optical field."""

    @lazy_property
    def eta(self):
        """The efficiency parameter η = (κ1/G1)(G/κ) of the first optical mode."""
        return eta_parameter(self.kappa1, self.G1, self.kappa, self.G)

    @lazy_property
    def eta2(self):
        """The efficiency parameter (κ2/G2)(G/κ) of the second optical mode."""
        return eta_parameter(self.kappa2, self.G2, self.kappa, self.G)

    @lazy_property
    def term1(self):
        """The first bracket term (ω/ω1)(d²/d1²)(κ1/G1)(G/κ)."""
        return self.omega / self.omega1 * (self.d / self.d1) ** 2 * self.eta

    @lazy_property
    def term2(self):
        """The second bracket term (ω/ω2)(d²/d2²)(κ2/G2)(G/κ)."""
        return self.omega / self.omega2 * (self.d / self.d2) ** 2 * self.eta2

    @lazy_property
    def coupling_ratios(self):
        """The ratios ``(g1²/g², g2²/g²)`` of the optical couplings to the IR coupling."""
        return (
            self.omega1 / self.omega * (self.d1 / self.d) ** 2 * self.G1 / self.G,
            self.omega2 / self.omega * (self.d2 / self.d) ** 2 * self.G2 / self.G,
        )

    @lazy_property
    def saturation_field_squared(self):
        """The saturation scale |𝓔2|²_s of the second optical field in V²/m²."""
        return saturation_scale(self.gamma32, self.d2)

    def shifts(self, xi):
        """
        Map values of the latent shift ξ to transition shifts using the widths of this context.

        :param xi: An array of shift values.
        :returns: A tuple ``(ν21, ν31, ν32)`` of arrays.
        """
        xi = numpy.asarray(xi, dtype=float)
        return (self.u21 * xi, self.u31 * xi, self.u32 * xi)


class ClosedFormResult(PropertyManager):

    """The value of a closed form together with its validity flags."""

    @required_property
    def name(self):
        """The name of the closed form (a string)."""

    @required_property
    def value(self):
        """The IR Rabi amplitude (complex for the weak-field sum, a magnitude otherwise)."""

    @mutable_property
    def flags(self):
        """Descriptions of the validity conditions that don't hold (a tuple of strings)."""
        return ()

    @mutable_property
    def intensity_ratio(self):
        """The IR to optical intensity ratio |𝓔|²/|𝓔1|² (if applicable, otherwise :data:`None`)."""

    @property
    def valid(self):
        """:data:`True` when all validity conditions hold."""
        return not self.flags


def gamma_factors(ctx, shifts=(0.0, 0.0, 0.0), drives=None):
    """
    Evaluate the complex decay factors of the weak-field solution.

    :param ctx: An :class:`AnalyticContext` object.
    :param shifts: The packet shifts ``(ν21, ν31, ν32)`` (numbers or arrays).
    :param drives: The optical Rabi amplitudes ``(e1, e2)`` (defaults to those of `ctx`).
    :returns: A tuple ``(Γ21, Γ31, Γ32, Γ̃32)`` with Γ_ik = γ_ik + i(Δ_ik + ν_ik)
              and Γ̃32 = Γ32 + |e1|²/Γ31 + |e2|²/Γ21*.

    >>> from triwave.analytic import AnalyticContext, gamma_factors
    >>> ctx = AnalyticContext(omega=98, omega1=1400, omega2=1498, d=2, d1=0.5, d2=0.5,
    ...                       kappa=1, kappa1=1, kappa2=1, G=0.1, G1=0.1, G2=0.1,
    ...                       gamma21=1, gamma31=1, gamma32=1, e1=0, e2=0)
    >>> gamma_factors(ctx, shifts=(2, 2, 0))[0]
    (1+2j)
    """
    e1, e2 = drives if drives is not None else (ctx.e1, ctx.e2)
    delta21, delta31, delta32 = ctx.detunings
    nu21, nu31, nu32 = shifts
    gamma21 = ctx.gamma21 + 1j * (delta21 + numpy.asarray(nu21))
    gamma31 = ctx.gamma31 + 1j * (delta31 + numpy.asarray(nu31))
    gamma32 = ctx.gamma32 + 1j * (delta32 + numpy.asarray(nu32))
    gamma_tilde = gamma32 + abs(e1) ** 2 / gamma31 + abs(e2) ** 2 / numpy.conj(gamma21)
    if numpy.ndim(gamma21) == 0:
        return complex(gamma21), complex(gamma31), complex(gamma32), complex(gamma_tilde)
    return gamma21, gamma31, gamma32, gamma_tilde


def eq6_ir_field(ctx, g2, n12, n13, shifts=None, weights=None):
    """
    Evaluate the weak-field IR amplitude e = (i g² e1* e2/κ)·Σ[n12/(Γ21*Γ̃32) + n13/(Γ31Γ̃32)].

    :param ctx: An :class:`AnalyticContext` object.
    :param g2: The IR coupling g² in meV² (so `ctx.kappa` must be in meV).
    :param n12: The population difference ρ11 − ρ22 (a number or an array per packet).
    :param n13: The population difference ρ11 − ρ33 (a number or an array per packet).
    :param shifts: The packet shifts ``(ν21, ν31, ν32)`` or :data:`None` for a single packet.
    :param weights: The quadrature weights of the packets (required with `shifts`).
    :returns: A :class:`ClosedFormResult` with the complex amplitude, flagged
              when |e| isn't below every γ_ik.
    """
    gamma21, gamma31, _, gamma_tilde = gamma_factors(ctx, shifts if shifts is not None else (0.0, 0.0, 0.0))
    terms = n12 / (numpy.conj(gamma21) * gamma_tilde) + n13 / (gamma31 * gamma_tilde)
    total = numpy.dot(weights, terms) if shifts is not None else terms
    field = complex(1j * g2 * ctx.e1.conjugate() * ctx.e2 / ctx.kappa * total)
    limit = min(ctx.gamma21, ctx.gamma31, ctx.gamma32)
    flags = () if abs(field) < limit else ("|e| = %g meV is not below min(γ) = %g meV" % (abs(field), limit),)
    return _report(ClosedFormResult(name='eq6', value=field, flags=flags))


def gain_clamped_populations(ctx, g1_squared, g2_squared, rule=None):
    """
    Get the population differences that clamp both optical gains at their losses.

    :param ctx: An :class:`AnalyticContext` object (``kappa1`` and ``kappa2``
                in meV).
    :param g1_squared: The coupling g1² of the first optical field in meV².
    :param g2_squared: The coupling g2² of the second optical field in meV².
    :param rule: A :class:`~triwave.ensemble.QuadratureRule` for an
                 inhomogeneous line (:data:`None` for a single packet).
    :returns: A tuple ``(n12, n13)`` of floats. The spectral distribution of
              the populations is assumed flat (no hole burning).

    At line center in a homogeneous medium this gives n12 = −κ1γ21/g1².
    """
    if rule is None:
        gamma21, gamma31, _, _ = gamma_factors(ctx)
        response21, response31 = (1 / gamma21).real, (1 / gamma31).real
    else:
        gamma21, gamma31, _, _ = gamma_factors(ctx, ctx.shifts(rule.nodes))
        response21 = numpy.dot(rule.weights, (1 / gamma21).real)
        response31 = numpy.dot(rule.weights, (1 / gamma31).real)
    return float(-ctx.kappa1 / (g1_squared * response21)), float(-ctx.kappa2 / (g2_squared * response31))


def eq6_ensemble_field(ctx, rule=None):
    """
    Evaluate the weak-field sum with gain-clamped populations.

    :param ctx: An :class:`AnalyticContext` object (decay rates in meV).
    :param rule: A :class:`~triwave.ensemble.QuadratureRule` (:data:`None`
                 for a homogeneous line).
    :returns: A :class:`ClosedFormResult` with the complex IR amplitude.

    The absolute IR coupling cancels after clamping, only the ratios in
    :attr:`AnalyticContext.coupling_ratios` remain. This is the quantity the
    closed forms for homogeneous and inhomogeneous lines approximate.
    """
    g2 = 1.0
    ratio1, ratio2 = ctx.coupling_ratios
    n12, n13 = gain_clamped_populations(ctx, ratio1 * g2, ratio2 * g2, rule)
    if rule is None:
        return eq6_ir_field(ctx, g2, n12, n13)
    return eq6_ir_field(ctx, g2, n12, n13, shifts=ctx.shifts(rule.nodes), weights=rule.weights)


def eq7_ir_field_homogeneous(ctx):
    """
    Evaluate the IR amplitude of a homogeneously broadened medium.

    :param ctx: An :class:`AnalyticContext` object.
    :returns: |e| = (|e1||e2|/γ32)·[(ω/ω1)(d²/d1²)(κ1/G1)(G/κ) + (ω/ω2)(d²/d2²)(κ2/G2)(G/κ)]
              in meV (a float).
    """
    return abs(ctx.e1) * abs(ctx.e2) / ctx.gamma32 * (ctx.term1 + ctx.term2)


def eta_parameter(kappa12, G12, kappa, G):
    """
    Calculate the down-conversion efficiency parameter η = (κ_{1,2}/G_{1,2})·(G/κ).

    :param kappa12: The loss of the optical mode (a number or a string like ``1500 cm-1``).
    :param G12: The confinement factor of the optical mode (a positive number).
    :param kappa: The loss of the IR mode (a number or a string like ``150 cm-1``).
    :param G: The confinement factor of the IR mode (a nonnegative number).
    :returns: η (a float).
    :raises: :exc:`.ValidationError` when the two losses are given in different
             units, a bare number and a loss with a unit count as different.

    >>> from triwave.analytic import eta_parameter
    >>> eta_parameter('150 cm-1', 0.1, '150 cm-1', 0.1)
    1.0
    """
    loss12, unit12 = _parse_loss(kappa12)
    loss, unit = _parse_loss(kappa)
    if unit12 != unit:
        msg = "Losses must be given in the same unit, got %s and %s!"
        raise ValidationError(msg % (unit12 or "a bare number", unit or "a bare number"))
    loss = coerce_positive(loss, 'IR loss')
    G12 = coerce_positive(G12, 'optical confinement factor')
    G = coerce_nonnegative(G, 'IR confinement factor')
    return (loss12 * G) / (G12 * loss)


def eq10a_eq11_inhomogeneous(ctx):
    """
    Evaluate the IR amplitude of an inhomogeneously broadened medium below saturation.

    :param ctx: An :class:`AnalyticContext` object.
    :returns: A :class:`ClosedFormResult` whose value is
              |e| = [2|e1||e2|/(γ32 + γ21)]·(u21/u32)·(ω/ω1)(d²/d1²)(κ1/G1)(G/κ)
              and whose :attr:`~ClosedFormResult.intensity_ratio` is given by
              :func:`eq11_intensity_ratio()`. It's flagged when a width isn't
              at least ten times the homogeneous width and the drives.
    :raises: :exc:`.ValidationError` when u32 is zero.

    Only the first optical field's term appears, the second one cancels in
    the limit u ≫ γ (both of its poles sit in the same half plane).
    """
    if not ctx.u32 > 0:
        raise ValidationError("The inhomogeneous closed form requires a positive u32!")
    value = 2 * abs(ctx.e1) * abs(ctx.e2) / (ctx.gamma32 + ctx.gamma21) * ctx.u21 / ctx.u32 * ctx.term1
    drive = max(abs(ctx.e1), abs(ctx.e2))
    flags = []
    for suffix in ('21', '31', '32'):
        width = getattr(ctx, 'u' + suffix)
        gamma = getattr(ctx, 'gamma' + suffix)
        if width < REGIME_RATIO * max(gamma, drive):
            flags.append("u%s = %g meV is not %i × max(γ%s, |e|) = %g meV" % (
                suffix, width, REGIME_RATIO, suffix, max(gamma, drive),
            ))
    result = ClosedFormResult(name='eq10a', value=value, flags=tuple(flags))
    result.intensity_ratio = eq11_intensity_ratio(ctx)
    return _report(result)


def eq11_intensity_ratio(ctx):
    """
    Evaluate the IR to optical intensity ratio below saturation.

    :param ctx: An :class:`AnalyticContext` object.
    :returns: |𝓔|²/|𝓔1|² = (|𝓔2|²/|𝓔2|²_s)·[γ32/(γ32 + γ21)
              ·(d/d1)(ω/ω1)(u21/u32)(κ1/G1)(G/κ)]² (a float).

    With the Rabi convention e = d𝓔/2ħ the saturation field corresponds to
    |e2| = γ32/2, which makes the prefactor γ32/(γ32 + γ21) (not twice that)
    when this ratio has to agree with the amplitude form.
    """
    field = abs(rabi_to_field(ctx.e2, ctx.d2)) ** 2
    bracket = (ctx.gamma32 / (ctx.gamma32 + ctx.gamma21) * ctx.d / ctx.d1 * ctx.omega / ctx.omega1
               * ctx.u21 / ctx.u32 * ctx.eta)
    return field / ctx.saturation_field_squared * bracket ** 2


def eq13_ir_field_holeburning(ctx, relaxation, coefficients=HOLEBURNING_COEFFICIENTS):
    """
    Evaluate the IR amplitude of an inhomogeneously broadened medium with spectral hole burning.

    :param ctx: An :class:`AnalyticContext` object.
    :param relaxation: The :class:`~triwave.units.RelaxationSpec` of the medium.
    :param coefficients: The bracket coefficients (defaults to
                         :data:`HOLEBURNING_COEFFICIENTS`, numerically
                         extracted values can be substituted).
    :returns: |e| = (|e1||e2|u/(γu32))·|c1·(ω/ω1)(d²/d1²)(κ1/G1)(G/κ) − c2·(ω/ω2)(d²/d2²)(κ2/G2)(G/κ)|
              in meV (a float).
    :raises: :exc:`.ValidationError` listing every violated assumption: equal
             drive magnitudes, all coherence and population rates equal to
             one γ, u21 ≈ u31 (u32 ≤ u21/4) and u32 > 0.
    """
    problems = []
    gamma = ctx.gamma21
    if not numpy.isclose(abs(ctx.e1), abs(ctx.e2), rtol=1e-9, atol=0):
        problems.append("|e1| = %g differs from |e2| = %g" % (abs(ctx.e1), abs(ctx.e2)))
    rates = dict(gamma31=ctx.gamma31, gamma32=ctx.gamma32, r21=relaxation.r21, r31=relaxation.r31, r32=relaxation.r32)
    for name, value in sorted(rates.items()):
        if not numpy.isclose(value, gamma, rtol=1e-9, atol=0):
            problems.append("%s = %g differs from γ = %g" % (name, value, gamma))
    if not ctx.u32 > 0:
        problems.append("u32 must be positive")
    elif ctx.u32 > 0.25 * ctx.u21:
        problems.append("u32 = %g exceeds u21/4 = %g (u31 isn't close to u21)" % (ctx.u32, 0.25 * ctx.u21))
    if problems:
        raise ValidationError("Hole burning closed form doesn't apply: %s" % "; ".join(problems))
    c1, c2 = coefficients
    return abs(ctx.e1) * abs(ctx.e2) * ctx.u21 / (gamma * ctx.u32) * abs(c1 * ctx.term1 - c2 * ctx.term2)


def saturation_scale(gamma32, d2):
    """
    Get the saturation scale |𝓔2|²_s = ħ²γ32²/d2².

    :param gamma32: The IR coherence decay rate in meV.
    :param d2: The dipole moment in e·nm.
    :returns: The squared field amplitude in V²/m² (a float).
    """
    gamma32 = coerce_positive(gamma32, 'gamma32')
    d2 = coerce_positive(d2, 'dipole moment')
    return (gamma32 * UNITS.millielectronvolt / (d2 * UNITS.dipole)) ** 2


def _parse_loss(value):
    if isinstance(value, str) and len(value.split()) == 2:
        return coerce_loss(value)
    return coerce_nonnegative(value, 'loss'), None


def _report(result):
    if result.flags:
        logger.warning("Closed form %s used outside of its validity regime: %s", result.name, "; ".join(result.flags))
    return result
