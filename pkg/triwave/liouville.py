# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Steady-state density matrix of one homogeneous packet of the three-level medium.

The rotating-frame master equations solved here are (ħ = 1, n_ik = ρ_ii − ρ_kk)::

 dρ33/dt = Λρ11 − (r31 + r32)ρ33 + 2 Im(e2* σ31) + 2 Im(e* σ32)
 dρ22/dt = r32ρ33 − r21ρ22 + 2 Im(e1* σ21) − 2 Im(e* σ32)
 dσ21/dt = −Γ21σ21 + i e1 n12 + i e* σ31 − i e2 σ32*
 dσ31/dt = −Γ31σ31 + i e2 n13 + i e σ21 − i e1 σ32
 dσ32/dt = −Γ32σ32 + i e n23 + i e2 σ21* − i e1* σ31

with Γ_ik = γ_ik + iΔ_ik and ρ11 = 1 − ρ22 − ρ33. The signs are pinned by
requiring that the drive-mixed part of σ32 reproduces the closed form
e1* e2 (n12/Γ21* + n13/Γ31)/Γ̃32 term by term, don't change them.

The unknowns are stacked as ``[ρ22, ρ33, σ21, σ21*, σ31, σ31*, σ32, σ32*]``
with the conjugates treated as independent variables, which turns the
steady state into one dense complex 8×8 linear system per packet. Packets are
solved in batches (one system per inhomogeneous shift) by
:func:`solve_packets()`.
"""

# External dependencies.
import numpy
from property_manager import PropertyManager, lazy_property, mutable_property, required_property
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import DegenerateParametersError, SingularityError, ValidationError

# Public identifiers that require documentation.
__all__ = (
    'CONDITION_LIMIT',
    'PacketParams',
    'PacketState',
    'ProbeResponse',
    'build_steady_system',
    'check_conditioning',
    'decay_factors',
    'logger',
    'matrix_to_vector',
    'sigma32_perturbative',
    'solve_packets',
    'steady_state',
    'time_derivative',
    'vector_to_matrix',
)

CONDITION_LIMIT = 1e12
"""Steady-state systems with a larger condition number are rejected (a float)."""

POSITIVITY_TOLERANCE = 1e-9
"""Eigenvalues of ρ below minus this value flag an unphysical steady state (a float)."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class PacketParams(PropertyManager):

    """The detunings, rates and drives of one homogeneous packet."""

    def __init__(self, **kw):
        """Initialize a :class:`PacketParams` object and check the loop identity."""
        super(PacketParams, self).__init__(**kw)
        delta21, delta31, delta32 = (float(d) for d in self.detunings)
        self.detunings = (delta21, delta31, delta32)
        if abs(delta31 - delta21 - delta32) > 1e-9 * max(1.0, abs(delta21), abs(delta32)):
            msg = "Detunings violate the loop identity (%r != %r + %r)!"
            raise ValidationError(msg % (delta31, delta21, delta32))
        self.e1, self.e2, self.e = complex(self.e1), complex(self.e2), complex(self.e)
        for field, name in ((self.e1, 'gamma21'), (self.e2, 'gamma31'), (self.e, 'gamma32')):
            if field != 0 and not getattr(self.relaxation, name) > 0:
                msg = "%s must be positive on a transition that carries a field!"
                raise ValidationError(msg % name)

    @mutable_property
    def detunings(self):
        """The detunings ``(Δ21, Δ31, Δ32)`` in meV including the packet shift (defaults to zero)."""
        return (0.0, 0.0, 0.0)

    @required_property
    def relaxation(self):
        """The :class:`~triwave.units.RelaxationSpec` of the medium."""

    @mutable_property
    def e1(self):
        """The complex Rabi amplitude on 2↔1 in meV (defaults to 0)."""
        return 0j

    @mutable_property
    def e2(self):
        """The complex Rabi amplitude on 3↔1 in meV (defaults to 0)."""
        return 0j

    @mutable_property
    def e(self):
        """The complex Rabi amplitude of the infrared field on 3↔2 in meV (defaults to 0)."""
        return 0j

    def replace(self, **kw):
        """
        Get a copy of these parameters with some attributes replaced.

        :param kw: Any of the properties of :class:`PacketParams`.
        :returns: A new :class:`PacketParams` object.
        """
        values = dict(detunings=self.detunings, relaxation=self.relaxation, e1=self.e1, e2=self.e2, e=self.e)
        values.update(kw)
        return PacketParams(**values)


class PacketState(PropertyManager):

    """
    The steady state of one packet (scalar attributes) or a batch of packets (array attributes).

    Populations are real, coherences are the complex slowly varying
    amplitudes σ_ik of ρ_ik.
    """

    @required_property
    def rho11(self):
        """Population of level 1."""

    @required_property
    def rho22(self):
        """Population of level 2."""

    @required_property
    def rho33(self):
        """Population of level 3."""

    @required_property
    def sigma21(self):
        """Coherence on the 2↔1 transition."""

    @required_property
    def sigma31(self):
        """Coherence on the 3↔1 transition."""

    @required_property
    def sigma32(self):
        """Coherence on the 3↔2 transition."""

    @property
    def n12(self):
        """Population difference ρ11 − ρ22."""
        return self.rho11 - self.rho22

    @property
    def n13(self):
        """Population difference ρ11 − ρ33."""
        return self.rho11 - self.rho33

    @property
    def n23(self):
        """Population difference ρ22 − ρ33 (negative means inversion of the infrared transition)."""
        return self.rho22 - self.rho33

    @property
    def trace(self):
        """The trace ρ11 + ρ22 + ρ33 (one by construction)."""
        return self.rho11 + self.rho22 + self.rho33

    @lazy_property
    def physical(self):
        """
        :data:`True` when the density matrix is positive semidefinite.

        Phenomenological dephasing combined with independent population rates
        can produce steady states that violate positivity. These are reported
        through this flag rather than rejected.
        """
        eigenvalues = numpy.linalg.eigvalsh(self.density_matrix)
        verdict = numpy.all(eigenvalues >= -POSITIVITY_TOLERANCE, axis=-1)
        return bool(verdict) if numpy.ndim(verdict) == 0 else verdict

    @lazy_property
    def density_matrix(self):
        """The (Hermitian) density matrix, shape ``(3, 3)`` or ``(n, 3, 3)``."""
        rho11, rho22, rho33 = (numpy.asarray(p) for p in (self.rho11, self.rho22, self.rho33))
        shape = numpy.shape(rho11)
        rho = numpy.zeros(shape + (3, 3), dtype=complex)
        rho[..., 0, 0] = rho11
        rho[..., 1, 1] = rho22
        rho[..., 2, 2] = rho33
        rho[..., 1, 0] = self.sigma21
        rho[..., 2, 0] = self.sigma31
        rho[..., 2, 1] = self.sigma32
        rho[..., 0, 1] = numpy.conj(self.sigma21)
        rho[..., 0, 2] = numpy.conj(self.sigma31)
        rho[..., 1, 2] = numpy.conj(self.sigma32)
        return rho

    @property
    def vector(self):
        """The state as the unknown vector of :func:`build_steady_system()`."""
        return matrix_to_vector(self.density_matrix)

    def select(self, index):
        """
        Get the state of a single packet out of a batch.

        :param index: The index of the packet (an integer).
        :returns: A :class:`PacketState` object with scalar attributes.
        """
        return PacketState(
            rho11=float(self.rho11[index]),
            rho22=float(self.rho22[index]),
            rho33=float(self.rho33[index]),
            sigma21=complex(self.sigma21[index]),
            sigma31=complex(self.sigma31[index]),
            sigma32=complex(self.sigma32[index]),
        )


class ProbeResponse(PropertyManager):

    """
    The response of σ32 to an infinitesimal infrared probe.

    Around e = 0 the coherence behaves as σ32(e) ≈ :attr:`source` +
    :attr:`susceptibility`·e + :attr:`conjugate_susceptibility`·e*.
    """

    @required_property
    def source(self):
        """The parametric (drive-mixed) coherence σ32 at e = 0."""

    @required_property
    def susceptibility(self):
        """The derivative ∂σ32/∂e at e = 0."""

    @required_property
    def conjugate_susceptibility(self):
        """The derivative ∂σ32/∂e* at e = 0."""

    @required_property
    def state(self):
        """The :class:`PacketState` at e = 0 (populations used by the closed forms)."""

    @required_property
    def gamma_tilde32(self):
        """The dressed decay Γ̃32 = Γ32 + |e1|²/Γ31 + |e2|²/Γ21*."""

    def evaluate(self, e):
        """
        Evaluate the linearized coherence.

        :param e: The infrared Rabi amplitude in meV (a complex number).
        :returns: The linearized σ32 (a complex number or array).
        """
        return self.source + self.susceptibility * e + self.conjugate_susceptibility * numpy.conj(e)


def build_steady_system(params):
    """
    Build the steady-state linear system of one packet.

    :param params: A :class:`PacketParams` object.
    :returns: A tuple ``(matrix, inhomogeneity)`` with a complex ``(8, 8)``
              matrix M and a complex vector c of length 8 such that
              d\\ **x**/dt = M\\ **x** + c for the stacked unknowns
              ``[ρ22, ρ33, σ21, σ21*, σ31, σ31*, σ32, σ32*]``. The trace
              condition is built in by eliminating ρ11.
    """
    matrix, inhomogeneity = _assemble(params, *_shift_arrays(None))
    return matrix[0], inhomogeneity[0]


def steady_state(params):
    """
    Solve for the steady state of one packet.

    :param params: A :class:`PacketParams` object.
    :returns: A :class:`PacketState` object with scalar attributes.
    :raises: :exc:`.DegenerateParametersError` when the system is singular
             or its condition number exceeds :data:`CONDITION_LIMIT`.
    """
    state = solve_packets(params).select(0)
    if not state.physical:
        logger.warning("Steady state violates positivity of the density matrix (%s).", state)
    return state


def solve_packets(params, shifts=None):
    """
    Solve the steady states of a batch of packets that differ only by their shifts.

    :param params: A :class:`PacketParams` object (the packet at zero shift).
    :param shifts: A tuple ``(ν21, ν31, ν32)`` of equally shaped arrays that are
                   added to the detunings of `params`, or :data:`None` to
                   solve only `params` itself.
    :returns: A :class:`PacketState` object with one-dimensional array attributes.
    :raises: :exc:`.DegenerateParametersError` when any of the systems is singular
             or too ill-conditioned.
    """
    matrix, inhomogeneity = _assemble(params, *_shift_arrays(shifts))
    check_conditioning(matrix, params)
    solution = numpy.linalg.solve(matrix, -inhomogeneity[..., None])[..., 0]
    rho22 = solution[:, 0].real
    rho33 = solution[:, 1].real
    return PacketState(
        rho11=1.0 - rho22 - rho33,
        rho22=rho22,
        rho33=rho33,
        sigma21=solution[:, 2],
        sigma31=solution[:, 4],
        sigma32=solution[:, 6],
    )


def sigma32_perturbative(params, shifts=None):
    """
    Linearize σ32 around a vanishing infrared field.

    :param params: A :class:`PacketParams` object whose infrared amplitude is zero.
    :param shifts: See :func:`solve_packets()`.
    :returns: A :class:`ProbeResponse` object (scalar attributes when
              `shifts` is :data:`None`, array attributes otherwise).
    :raises: :exc:`.ValidationError` when ``params.e`` isn't zero,
             :exc:`.SingularityError` when Γ̃32 vanishes.

    The steady system depends on the probe as (M₀ + e·Mₑ + e*·M_ē)\\ **x** = −c,
    so the exact derivatives at e = 0 are −M₀⁻¹Mₑ\\ **x**₀ and −M₀⁻¹M_ē\\ **x**₀.
    The source part is the closed form e1* e2 (n12/Γ21* + n13/Γ31)/Γ̃32
    evaluated with the saturated populations of the e = 0 state.
    """
    if params.e != 0:
        raise ValidationError("The probe response is defined around e = 0, got e = %r!" % params.e)
    arrays = _shift_arrays(shifts)
    gamma_tilde = decay_factors(params, arrays)[3]
    base, inhomogeneity = _assemble(params, *arrays)
    check_conditioning(base, params)
    real_probe, _ = _assemble(params.replace(e=1.0), *arrays)
    imaginary_probe, _ = _assemble(params.replace(e=1.0j), *arrays)
    # Split the probe dependence into its holomorphic and antiholomorphic parts.
    along_e = 0.5 * ((real_probe - base) - 1j * (imaginary_probe - base))
    along_conjugate = 0.5 * ((real_probe - base) + 1j * (imaginary_probe - base))
    x0 = numpy.linalg.solve(base, -inhomogeneity[..., None])
    dx = -numpy.linalg.solve(base, along_e @ x0)[..., 0]
    dx_conjugate = -numpy.linalg.solve(base, along_conjugate @ x0)[..., 0]
    x0 = x0[..., 0]
    rho22, rho33 = x0[:, 0].real, x0[:, 1].real
    state = PacketState(
        rho11=1.0 - rho22 - rho33, rho22=rho22, rho33=rho33,
        sigma21=x0[:, 2], sigma31=x0[:, 4], sigma32=x0[:, 6],
    )
    response = ProbeResponse(
        source=x0[:, 6],
        susceptibility=dx[:, 6],
        conjugate_susceptibility=dx_conjugate[:, 6],
        state=state,
        gamma_tilde32=gamma_tilde,
    )
    if shifts is None:
        response = ProbeResponse(
            source=complex(response.source[0]),
            susceptibility=complex(response.susceptibility[0]),
            conjugate_susceptibility=complex(response.conjugate_susceptibility[0]),
            state=state.select(0),
            gamma_tilde32=complex(gamma_tilde[0]),
        )
    return response


def time_derivative(params, rho):
    """
    Evaluate the right hand side of the rotating-frame master equation.

    :param params: A :class:`PacketParams` object.
    :param rho: A complex ``(3, 3)`` matrix (levels ordered 1, 2, 3). It
                doesn't have to be Hermitian: the right hand side is linear
                in the entries of ρ, which enables numerical differentiation
                along each entry separately.
    :returns: The complex ``(3, 3)`` matrix dρ/dt.

    This evaluates −i[H, ρ] plus relaxation using matrix products, independent
    of the element-wise assembly in :func:`build_steady_system()`.
    """
    rates = params.relaxation
    delta21, delta31, _ = params.detunings
    e1, e2, e = params.e1, params.e2, params.e
    hamiltonian = numpy.array([
        [0.0, -numpy.conj(e1), -numpy.conj(e2)],
        [-e1, delta21, -numpy.conj(e)],
        [-e2, -e, delta31],
    ], dtype=complex)
    rho = numpy.asarray(rho, dtype=complex)
    derivative = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    dephasing = numpy.array([
        [0.0, rates.gamma21, rates.gamma31],
        [rates.gamma21, 0.0, rates.gamma32],
        [rates.gamma31, rates.gamma32, 0.0],
    ])
    derivative -= dephasing * rho
    derivative[0, 0] += -rates.pump * rho[0, 0] + rates.r21 * rho[1, 1] + rates.r31 * rho[2, 2]
    derivative[1, 1] += rates.r32 * rho[2, 2] - rates.r21 * rho[1, 1]
    derivative[2, 2] += rates.pump * rho[0, 0] - (rates.r31 + rates.r32) * rho[2, 2]
    return derivative


def vector_to_matrix(vector):
    """
    Convert stacked unknowns to a 3×3 matrix.

    :param vector: A complex vector ``[ρ22, ρ33, σ21, σ21*, σ31, σ31*, σ32, σ32*]``.
    :returns: The complex ``(3, 3)`` matrix with ρ11 = 1 − ρ22 − ρ33.
    """
    x = numpy.asarray(vector, dtype=complex)
    return numpy.array([
        [1.0 - x[0] - x[1], x[3], x[5]],
        [x[2], x[0], x[7]],
        [x[4], x[6], x[1]],
    ], dtype=complex)


def matrix_to_vector(rho):
    """
    Convert 3×3 matrices to stacked unknowns (the inverse of :func:`vector_to_matrix()`).

    :param rho: A complex array of shape ``(..., 3, 3)``.
    :returns: A complex array of shape ``(..., 8)``.
    """
    rho = numpy.asarray(rho, dtype=complex)
    return numpy.stack([
        rho[..., 1, 1], rho[..., 2, 2],
        rho[..., 1, 0], rho[..., 0, 1],
        rho[..., 2, 0], rho[..., 0, 2],
        rho[..., 2, 1], rho[..., 1, 2],
    ], axis=-1)


def check_conditioning(matrix, params):
    """
    Reject singular or ill-conditioned steady-state systems.

    :param matrix: A complex array of shape ``(n, 8, 8)``.
    :param params: The :class:`PacketParams` the systems were built from.
    :raises: :exc:`.DegenerateParametersError` when the largest condition
             number exceeds :data:`CONDITION_LIMIT`.
    """
    with numpy.errstate(all='ignore'):
        condition = numpy.linalg.cond(matrix)
    condition = numpy.where(numpy.isfinite(condition), condition, numpy.inf)
    index = int(numpy.argmax(condition))
    worst = condition[index]
    logger.spam("Largest condition number of %i steady-state system(s): %.3g", len(matrix), worst)
    if not worst <= CONDITION_LIMIT:
        rates = params.relaxation
        suspects = [name for name in rates.rate_names if getattr(rates, name) == 0]
        raise DegenerateParametersError(
            "Steady-state system is singular or ill-conditioned (condition number %.3g)" % worst,
            rates=suspects or rates.rate_names,
            index=index,
        )


def decay_factors(params, shifts=None):
    """
    Evaluate the complex decay factors of a packet (or a batch of packets).

    :param params: A :class:`PacketParams` object.
    :param shifts: See :func:`solve_packets()`.
    :returns: A tuple of four complex arrays ``(Γ21, Γ31, Γ32, Γ̃32)``.
    :raises: :exc:`.SingularityError` when Γ21, Γ31 or Γ̃32 vanishes.
    """
    nu21, nu31, nu32 = _shift_arrays(shifts)
    rates = params.relaxation
    delta21, delta31, delta32 = params.detunings
    gamma21 = rates.gamma21 + 1j * (delta21 + nu21)
    gamma31 = rates.gamma31 + 1j * (delta31 + nu31)
    gamma32 = rates.gamma32 + 1j * (delta32 + nu32)
    if numpy.any(gamma21 == 0) or numpy.any(gamma31 == 0):
        raise SingularityError("Optical coherence decay vanishes, the dressed IR decay is undefined!")
    gamma_tilde = gamma32 + abs(params.e1) ** 2 / gamma31 + abs(params.e2) ** 2 / numpy.conj(gamma21)
    if numpy.any(gamma_tilde == 0):
        raise SingularityError("Dressed IR coherence decay vanishes (coherent population trapping)!")
    return gamma21, gamma31, gamma32, gamma_tilde


def _shift_arrays(shifts):
    if shifts is None:
        return numpy.zeros(1), numpy.zeros(1), numpy.zeros(1)
    return tuple(numpy.atleast_1d(numpy.asarray(s, dtype=float)) for s in shifts)


def _assemble(params, nu21, nu31, nu32):
    rates = params.relaxation
    delta21, delta31, delta32 = params.detunings
    e1, e2, e = params.e1, params.e2, params.e
    c1, c2, c = e1.conjugate(), e2.conjugate(), e.conjugate()
    size = len(nu21)
    g21 = rates.gamma21 + 1j * (delta21 + nu21)
    g31 = rates.gamma31 + 1j * (delta31 + nu31)
    g32 = rates.gamma32 + 1j * (delta32 + nu32)
    m = numpy.zeros((size, 8, 8), dtype=complex)
    b = numpy.zeros((size, 8), dtype=complex)
    # Populations: rho22 and rho33 (rho11 eliminated by the trace).
    m[:, 0, 0] = -rates.r21
    m[:, 0, 1] = rates.r32
    m[:, 0, 2] = -1j * c1
    m[:, 0, 3] = 1j * e1
    m[:, 0, 6] = 1j * c
    m[:, 0, 7] = -1j * e
    m[:, 1, 0] = -rates.pump
    m[:, 1, 1] = -rates.pump - rates.r31 - rates.r32
    m[:, 1, 4] = -1j * c2
    m[:, 1, 5] = 1j * e2
    m[:, 1, 6] = -1j * c
    m[:, 1, 7] = 1j * e
    b[:, 1] = rates.pump
    # sigma21 and its conjugate.
    m[:, 2, 2] = -g21
    m[:, 2, 0] = -2j * e1
    m[:, 2, 1] = -1j * e1
    m[:, 2, 4] = 1j * c
    m[:, 2, 7] = -1j * e2
    b[:, 2] = 1j * e1
    m[:, 3, 3] = -numpy.conj(g21)
    m[:, 3, 0] = 2j * c1
    m[:, 3, 1] = 1j * c1
    m[:, 3, 5] = -1j * e
    m[:, 3, 6] = 1j * c2
    b[:, 3] = -1j * c1
    # sigma31 and its conjugate.
    m[:, 4, 4] = -g31
    m[:, 4, 0] = -1j * e2
    m[:, 4, 1] = -2j * e2
    m[:, 4, 2] = 1j * e
    m[:, 4, 6] = -1j * e1
    b[:, 4] = 1j * e2
    m[:, 5, 5] = -numpy.conj(g31)
    m[:, 5, 0] = 1j * c2
    m[:, 5, 1] = 2j * c2
    m[:, 5, 3] = -1j * c
    m[:, 5, 7] = 1j * c1
    b[:, 5] = -1j * c2
    # sigma32 and its conjugate.
    m[:, 6, 6] = -g32
    m[:, 6, 0] = 1j * e
    m[:, 6, 1] = -1j * e
    m[:, 6, 3] = 1j * e2
    m[:, 6, 4] = -1j * c1
    m[:, 7, 7] = -numpy.conj(g32)
    m[:, 7, 0] = -1j * c
    m[:, 7, 1] = 1j * c
    m[:, 7, 2] = -1j * c2
    m[:, 7, 5] = 1j * e1
    return m, b
