# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Averaging over an inhomogeneously broadened ensemble of packets.

The ensemble is described by a single latent shift variable ξ with density
:func:`distribution_weight()`. A packet at ξ has its transition frequencies
shifted by ν_ik = u_ik·ξ, so one value of ξ moves all three transitions
together (as a size fluctuation of a quantum dot would). For the three shifts
to stay on a closed loop the widths must satisfy u31 = u21 + u32, which
:class:`BroadeningSpec` enforces.

When the homogeneous widths are comparable to the node spacing of the base
rule (Gauss-Hermite for a Gaussian line, a trapezoid rule for a Lorentzian
line) the base rule is used as is. When the packets respond on a scale of
γ/u ≪ 1 in ξ, :func:`quadrature_rule()` switches to composite Gauss-Legendre
panels that are graded geometrically towards every resonance (and optionally
refined uniformly across spectral holes) so narrow features are resolved
without millions of nodes.
"""

# Standard library modules.
import math

# External dependencies.
import numpy
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from property_manager import PropertyManager, lazy_property, mutable_property, required_property
from scipy import special
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import (
    DegenerateParametersError,
    RegimeError,
    ValidationError,
    coerce_nonnegative,
    coerce_positive,
)
from triwave.liouville import decay_factors, sigma32_perturbative, solve_packets

# Public identifiers that require documentation.
__all__ = (
    'BROADENING_KINDS',
    'BroadeningSpec',
    'EnsembleResult',
    'QuadratureRule',
    'distribution_weight',
    'ensemble_average',
    'holeburning_average',
    'holeburning_coefficients',
    'logger',
    'quadrature_rule',
    'truncated_mass',
)

BROADENING_KINDS = ('homogeneous', 'gaussian', 'lorentzian')
"""The supported shapes of the inhomogeneous line (a tuple of strings)."""

REGIME_RATIO = 10
"""The minimum ratio between scales that are supposed to be well separated (an integer)."""

HOLE_HALF_WIDTH = 4
"""Half width (in units of the hole width) of the uniformly refined region around a spectral hole."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class BroadeningSpec(PropertyManager):

    """The shape, widths and quadrature settings of the inhomogeneous line."""

    def __init__(self, **kw):
        """Initialize a :class:`BroadeningSpec` object and validate it."""
        super(BroadeningSpec, self).__init__(**kw)
        if self.kind not in BROADENING_KINDS:
            msg = "Unsupported broadening kind %r (expected one of %s)!"
            raise ValidationError(msg % (self.kind, ", ".join(BROADENING_KINDS)))
        u21 = coerce_nonnegative(self.u21, 'u21')
        u31 = coerce_nonnegative(self.u31, 'u31')
        u32 = coerce_nonnegative(self.u32, 'u32')
        if abs(u31 - u21 - u32) > 1e-9 * max(1.0, u31):
            msg = "A single shift variable requires u31 = u21 + u32, got u31=%r, u21=%r, u32=%r!"
            raise ValidationError(msg % (u31, u21, u32))
        if self.kind == 'homogeneous' and (u21 or u32):
            raise ValidationError("Homogeneous broadening requires all inhomogeneous widths to be zero!")
        if self.kind != 'homogeneous' and not u21 > 0:
            msg = "%s broadening requires a positive optical width u21!"
            raise ValidationError(msg % self.kind.capitalize())
        if not (isinstance(self.nodes, int) and self.nodes >= 17):
            raise ValidationError("The number of quadrature nodes must be an integer >= 17, got %r!" % self.nodes)
        if coerce_positive(self.cutoff, 'cutoff') < 5:
            raise ValidationError("The quadrature cutoff must be at least 5, got %r!" % self.cutoff)

    @required_property
    def kind(self):
        """The shape of the line (one of the strings in :data:`BROADENING_KINDS`)."""

    @mutable_property
    def u21(self):
        """The inhomogeneous half width of the 2↔1 transition in meV (defaults to 0)."""
        return 0.0

    @mutable_property
    def u32(self):
        """The inhomogeneous half width of the 3↔2 transition in meV (defaults to 0)."""
        return 0.0

    @mutable_property
    def u31(self):
        """The inhomogeneous half width of the 3↔1 transition in meV (defaults to :attr:`u21` + :attr:`u32`)."""
        return self.u21 + self.u32

    @mutable_property
    def nodes(self):
        """The number of nodes of the base quadrature rule (defaults to 129)."""
        return 129

    @mutable_property
    def cutoff(self):
        """The integration range ±cutoff in units of the width (defaults to 5)."""
        return 5.0

    @mutable_property
    def refine(self):
        """:data:`True` to refine the quadrature across spectral holes (the default)."""
        return True

    @property
    def widths(self):
        """The widths ``(u21, u31, u32)`` (a tuple of floats)."""
        return (self.u21, self.u31, self.u32)

    def shifts(self, xi):
        """
        Map values of the latent shift to transition shifts.

        :param xi: An array of shift values ξ.
        :returns: A tuple ``(ν21, ν31, ν32)`` of arrays.
        """
        xi = numpy.asarray(xi, dtype=float)
        return tuple(u * xi for u in self.widths)


class QuadratureRule(PropertyManager):

    """Nodes and weights of a quadrature rule over the latent shift ξ."""

    @required_property
    def nodes(self):
        """The nodes ξ (a numpy array)."""

    @required_property
    def weights(self):
        """The weights, with the line shape already folded in (a numpy array)."""

    @required_property
    def scheme(self):
        """How the rule was built: ``point``, ``base`` or ``panels``."""

    @lazy_property
    def mass(self):
        """The sum of the weights (a float)."""
        return float(numpy.sum(self.weights))


class EnsembleResult(PropertyManager):

    """The result of averaging packet quantities over the ensemble."""

    @required_property
    def value(self):
        """The average of the requested quantity."""

    @required_property
    def sigma32(self):
        """The average infrared coherence ⟨σ32⟩ (a complex number)."""

    @required_property
    def states(self):
        """The :class:`~triwave.liouville.PacketState` batch at the quadrature nodes."""

    @required_property
    def rule(self):
        """The :class:`QuadratureRule` that was used."""

    @mutable_property
    def error_estimate(self):
        """The absolute difference with the same average on a finer rule (defaults to 0)."""
        return 0.0

    @mutable_property
    def ir_gain(self):
        """
        The averaged gain of the infrared transition per unit g² in meV⁻¹ (defaults to 0).

        Computed as −⟨Re(n23/Γ̃32)⟩, so it's negative when the transition
        absorbs (no inversion) and positive when it's inverted.
        """
        return 0.0

    @mutable_property
    def susceptibility(self):
        """The average ⟨∂σ32/∂e⟩ when the result was linearized (otherwise :data:`None`)."""

    @mutable_property
    def conjugate_susceptibility(self):
        """The average ⟨∂σ32/∂e*⟩ when the result was linearized (otherwise :data:`None`)."""

    @property
    def nodes(self):
        """The quadrature nodes ξ."""
        return self.rule.nodes

    @property
    def weights(self):
        """The quadrature weights."""
        return self.rule.weights

    @lazy_property
    def profile(self):
        """
        The spectral profile of the ensemble.

        A dictionary with the arrays ``xi`` (node positions), ``weight``,
        ``rho11``, ``rho22``, ``rho33``, ``n12``, ``n13`` and ``n23``, one
        entry per node in ascending ξ. Spectral holes show up as dips in the
        population differences.
        """
        profile = dict(xi=self.nodes, weight=self.weights)
        for name in ('rho11', 'rho22', 'rho33', 'n12', 'n13', 'n23'):
            profile[name] = numpy.real(getattr(self.states, name))
        return profile

    @lazy_property
    def populations(self):
        """The averaged populations ``(ρ11, ρ22, ρ33)`` (a tuple of floats)."""
        return tuple(float(self.average(name)) for name in ('rho11', 'rho22', 'rho33'))

    @lazy_property
    def n23_min(self):
        """The smallest n23 at any node (nonnegative means no inversion anywhere)."""
        return float(numpy.min(self.states.n23))

    def average(self, attribute):
        """
        Average an attribute of the packet states.

        :param attribute: The name of a :class:`~triwave.liouville.PacketState` attribute.
        :returns: The weighted average (a number).
        """
        return numpy.dot(self.weights, getattr(self.states, attribute))

    def hole_depth(self, attribute='n12', center=0.0):
        """
        Measure the depth of a saturation dip in the profile of a packet attribute.

        :param attribute: The name of a :class:`~triwave.liouville.PacketState` attribute.
        :param center: The position ξ of the hole (a float, defaults to line center).
        :returns: The fractional depth 1 − f(center)/f(far), where "far" is the node
                  furthest from `center` (a float).
        """
        profile = getattr(self.states, attribute)
        distance = numpy.abs(self.nodes - center)
        return float(1 - profile[numpy.argmin(distance)] / profile[numpy.argmax(distance)])


def distribution_weight(xi, kind):
    """
    Evaluate the normalized line shape.

    :param xi: The latent shift ξ (a number or array).
    :param kind: ``gaussian`` (exp(−ξ²)/√π) or ``lorentzian`` (1/π(1 + ξ²)).
    :returns: The probability density (same shape as `xi`).
    :raises: :exc:`.ValidationError` for the homogeneous kind (which has
             no distribution) and for unknown kinds.

    >>> from triwave.ensemble import distribution_weight
    >>> round(distribution_weight(0, 'gaussian'), 6)
    0.56419
    """
    xi = numpy.asarray(xi, dtype=float)
    if kind == 'gaussian':
        return numpy.exp(-xi ** 2) / math.sqrt(math.pi)
    elif kind == 'lorentzian':
        return 1.0 / (math.pi * (1.0 + xi ** 2))
    elif kind == 'homogeneous':
        raise ValidationError("A homogeneous line doesn't have a shift distribution!")
    else:
        raise ValidationError("Unsupported broadening kind %r!" % kind)


def truncated_mass(kind, cutoff):
    """
    Get the exact probability mass of a line shape on [−cutoff, cutoff].

    :param kind: ``gaussian`` or ``lorentzian``.
    :param cutoff: The half width of the interval (a positive number).
    :returns: The mass (a float). Averages over a Lorentzian line aren't
              renormalized, they miss the tail mass 1 − this value.
    """
    cutoff = coerce_positive(cutoff, 'cutoff')
    if kind == 'gaussian':
        return float(special.erf(cutoff))
    elif kind == 'lorentzian':
        return 2.0 / math.pi * math.atan(cutoff)
    raise ValidationError("Unsupported broadening kind %r!" % kind)


def quadrature_rule(broadening, params=None, holes=False, finer=False):
    """
    Build a quadrature rule over the latent shift.

    :param broadening: A :class:`BroadeningSpec` object.
    :param params: The :class:`~triwave.liouville.PacketParams` at ξ = 0, used
                   to locate resonances and their widths (optional).
    :param holes: :data:`True` to refine uniformly across the spectral holes
                  burned by the optical drives.
    :param finer: :data:`True` to get the rule used for error estimation
                  (twice the nodes for a base rule, every panel halved for a
                  panel rule).
    :returns: A :class:`QuadratureRule` object.
    """
    if broadening.kind == 'homogeneous':
        return QuadratureRule(nodes=numpy.zeros(1), weights=numpy.ones(1), scheme='point')
    size = broadening.nodes * (2 if finer else 1)
    if broadening.kind == 'gaussian':
        nodes, weights = hermgauss(size)
        weights = weights / math.sqrt(math.pi)
    else:
        nodes = numpy.linspace(-broadening.cutoff, broadening.cutoff, size)
        spacing = nodes[1] - nodes[0]
        weights = numpy.full(size, spacing)
        weights[[0, -1]] *= 0.5
        weights *= distribution_weight(nodes, broadening.kind)
    base = QuadratureRule(nodes=nodes, weights=weights, scheme='base')
    width = _feature_width(broadening, params)
    if not holes and (width is None or width >= 2 * numpy.min(numpy.diff(nodes))):
        return base
    edges = _panel_edges(broadening, params, width, holes)
    if finer:
        edges = numpy.sort(numpy.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    order = max(8, broadening.nodes // 12)
    x, w = leggauss(order)
    left, right = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (right - left) * x + 0.5 * (right + left)).ravel()
    weights = (0.5 * (right - left) * w).ravel() * distribution_weight(nodes, broadening.kind)
    return QuadratureRule(nodes=nodes, weights=weights, scheme='panels')


def ensemble_average(params, broadening, quantity='sigma32', linearize=False):
    """
    Average a packet quantity over the inhomogeneous line.

    :param params: The :class:`~triwave.liouville.PacketParams` of the packet at ξ = 0.
    :param broadening: A :class:`BroadeningSpec` object.
    :param quantity: The name of a :class:`~triwave.liouville.PacketState`
                     attribute or a callable that takes a batch of packet
                     states and returns an array (defaults to ``sigma32``).
    :param linearize: :data:`True` to solve the packets with
                      :func:`~triwave.liouville.sigma32_perturbative()`
                      (requires e = 0) so that the result also carries the
                      averaged probe susceptibilities.
    :returns: An :class:`EnsembleResult` object. For the homogeneous kind
              its value is exactly the single packet value.
    :raises: :exc:`.DegenerateParametersError` naming the node ξ at which a
             packet solve failed.
    """
    return _average(params, broadening, quantity, linearize, holes=False)


def holeburning_average(params, broadening, strong_drive=True):
    """
    Average over the ensemble in the spectral hole burning regime.

    :param params: The :class:`~triwave.liouville.PacketParams` at ξ = 0.
    :param broadening: A :class:`BroadeningSpec` object.
    :param strong_drive: :data:`True` to require |e1|, |e2| ≥ 10 γ (the
                         default), :data:`False` to only require u ≥ 10 |e1,2|.
    :returns: An :class:`EnsembleResult` object (linearized when e = 0).
    :raises: :exc:`.RegimeError` when the scales aren't separated, in which
             case :func:`ensemble_average()` is the right tool.
    """
    if broadening.kind == 'homogeneous':
        raise RegimeError("Spectral hole burning requires an inhomogeneous line!")
    problems = []
    rates = params.relaxation
    gamma = max(rates.gamma21, rates.gamma31, rates.gamma32)
    drive = max(abs(params.e1), abs(params.e2))
    if strong_drive:
        for name, field in (('e1', params.e1), ('e2', params.e2)):
            if abs(field) < REGIME_RATIO * gamma:
                msg = "|%s| = %g meV is less than %i × γ = %g meV"
                problems.append(msg % (name, abs(field), REGIME_RATIO, gamma))
    for name in ('u21', 'u31'):
        width = getattr(broadening, name)
        if width < REGIME_RATIO * drive:
            problems.append("%s = %g meV is less than %i × |e| = %g meV" % (name, width, REGIME_RATIO, drive))
    if problems:
        raise RegimeError("Not in the hole burning regime: %s" % "; ".join(problems))
    return _average(params, broadening, 'sigma32', linearize=(params.e == 0), holes=broadening.refine)


def holeburning_coefficients(params, broadening, strong_drive=True):
    """
    Extract the two coefficients of the hole burning closed form from quadrature.

    :param params: The :class:`~triwave.liouville.PacketParams` at ξ = 0 with e = 0.
    :param broadening: A :class:`BroadeningSpec` object.
    :param strong_drive: See :func:`holeburning_average()`.
    :returns: A tuple ``(c1, c2)`` of floats.
    :raises: :exc:`.RegimeError` when the optical transitions don't provide
             gain (there is nothing to clamp to), :exc:`.ValidationError` when
             u32 is zero.

    The weak-field IR amplitude is (g²/κ) e1* e2 i(A1 + A2) with
    A1 = ⟨n12/Γ21*Γ̃32⟩ and A2 = ⟨n13/Γ31Γ̃32⟩. Gain clamping of the optical
    modes turns g1²/κ1 into 1/L1 with L1 = Re(i⟨σ21⟩/e1) (likewise for the
    second field), so in the form |e1||e2|(u/γu32)·|c1·T1 − c2·T2| the
    coefficients are c1 = |A1|γu32/(u L1) and c2 = −Re(A2 A1*)/|A1|·γu32/(u L2).
    """
    if not broadening.u32 > 0:
        raise ValidationError("Hole burning coefficients are defined relative to a positive u32!")
    result = holeburning_average(params, broadening, strong_drive)
    shifts = broadening.shifts(result.nodes)
    gamma21, gamma31, _, gamma_tilde = decay_factors(params, shifts)
    states = result.states
    a1 = numpy.dot(result.weights, states.n12 / (numpy.conj(gamma21) * gamma_tilde))
    a2 = numpy.dot(result.weights, states.n13 / (gamma31 * gamma_tilde))
    gain1 = (1j * result.average('sigma21') / params.e1).real
    gain2 = (1j * result.average('sigma31') / params.e2).real
    if not (gain1 > 0 and gain2 > 0):
        msg = "Optical transitions don't provide gain (%g, %g), their fields can't be clamped!"
        raise RegimeError(msg % (gain1, gain2))
    scale = params.relaxation.gamma21 * broadening.u32 / broadening.u21
    c1 = abs(a1) * scale / gain1
    c2 = -(a2 * numpy.conj(a1)).real / abs(a1) * scale / gain2
    logger.verbose("Hole burning coefficients from %i nodes: c1 = %.4f, c2 = %.4f.", len(result.nodes), c1, c2)
    return float(c1), float(c2)


def _average(params, broadening, quantity, linearize, holes):
    rule = quadrature_rule(broadening, params, holes=holes)
    result = _evaluate(params, broadening, rule, quantity, linearize)
    if rule.scheme != 'point':
        finer = quadrature_rule(broadening, params, holes=holes, finer=True)
        refined = _evaluate(params, broadening, finer, quantity, linearize)
        result.error_estimate = float(abs(refined.value - result.value))
    logger.debug("Averaged %s over %i nodes (%s rule, mass %.10f, error estimate %.2g).",
                 quantity if isinstance(quantity, str) else "custom quantity",
                 len(rule.nodes), rule.scheme, rule.mass, result.error_estimate)
    return result


def _evaluate(params, broadening, rule, quantity, linearize):
    shifts = broadening.shifts(rule.nodes)
    response = None
    try:
        if linearize:
            response = sigma32_perturbative(params, shifts)
            states = response.state
        else:
            states = solve_packets(params, shifts)
    except DegenerateParametersError as e:
        xi = rule.nodes[e.index] if e.index is not None else float('nan')
        raise DegenerateParametersError("Packet solve failed at node ξ = %g" % xi, rates=e.rates, index=e.index)
    values = quantity(states) if callable(quantity) else getattr(states, quantity)
    gamma_tilde = decay_factors(params, shifts)[3]
    result = EnsembleResult(
        value=numpy.dot(rule.weights, values),
        sigma32=complex(numpy.dot(rule.weights, states.sigma32)),
        states=states,
        rule=rule,
        ir_gain=float(-numpy.dot(rule.weights, (states.n23 / gamma_tilde).real)),
    )
    if response is not None:
        result.susceptibility = complex(numpy.dot(rule.weights, response.susceptibility))
        result.conjugate_susceptibility = complex(numpy.dot(rule.weights, response.conjugate_susceptibility))
    return result


def _feature_width(broadening, params):
    if params is None:
        return None
    rates = params.relaxation
    gammas = [g for g in (rates.gamma21, rates.gamma31, rates.gamma32) if g > 0]
    return min(gammas) / max(broadening.widths) if gammas else None


def _panel_edges(broadening, params, width, holes):
    limit = broadening.cutoff
    edges = [-limit, limit]
    centers = [0.0]
    if params is not None:
        centers = [-delta / u for delta, u in zip(params.detunings, broadening.widths) if u > 0] or centers
    if width is not None:
        for center in centers:
            edges.append(center)
            offset = width
            while offset < 2 * limit:
                edges.extend((center - offset, center + offset))
                offset *= 2
    if holes and params is not None:
        hole = max(abs(params.e1), abs(params.e2)) / broadening.u21
        if hole > 0:
            steps = numpy.arange(-2 * HOLE_HALF_WIDTH, 2 * HOLE_HALF_WIDTH + 1) * 0.5 * hole
            for center in centers[:2]:
                edges.extend(center + steps)
    edges = numpy.unique(numpy.clip(edges, -limit, limit))
    keep = numpy.concatenate([[True], numpy.diff(edges) > 1e-12 * limit])
    return edges[keep]
