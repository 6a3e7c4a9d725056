# Test suite for the `triwave' Python package.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""Test suite for the `triwave` package."""

# Standard library modules.
import codecs
import csv
import io
import json
import logging
import math
import os

# External dependencies.
import numpy
from humanfriendly.testing import TemporaryDirectory, TestCase, run_cli
from mock import MagicMock, patch

# The module we're testing.
import triwave.config
from triwave import (
    ConfigError,
    ConvergenceError,
    DegenerateParametersError,
    NumericalError,
    RegimeError,
    SingularityError,
    ValidationError,
    coerce_loss,
    coerce_nonnegative,
    coerce_positive,
)
from triwave.analytic import (
    AnalyticContext,
    eq10a_eq11_inhomogeneous,
    eq13_ir_field_holeburning,
    eq6_ir_field,
    eq7_ir_field_homogeneous,
    eta_parameter,
    gamma_factors,
    saturation_scale,
)
from triwave.cavity import (
    CavityModeSpec,
    DriveSet,
    clamp_drives,
    coupling_g2,
    manley_rowe_cap,
    matched_ir_index,
    mode_steady_field,
    output_power,
    phase_mismatch,
    self_consistent_ir,
)
from triwave.cli import EXIT_INTERNAL, EXIT_INVALID, EXIT_NUMERICAL, main
from triwave.config import SCHEMA, SweepSpec, parse_config
from triwave.ensemble import (
    BroadeningSpec,
    distribution_weight,
    ensemble_average,
    holeburning_average,
    holeburning_coefficients,
    quadrature_rule,
    truncated_mass,
)
from triwave.liouville import (
    PacketParams,
    build_steady_system,
    decay_factors,
    sigma32_perturbative,
    solve_packets,
    steady_state,
    time_derivative,
)
from triwave.output import emit, render_table
from triwave.scenario import COLUMNS, run_scenario, run_sweep, scenario_from_config
from triwave.units import (
    DriveField,
    LevelScheme,
    RelaxationSpec,
    UNITS,
    closed_loop_detunings,
    coupling_rate_squared,
    energy_from_wavelength,
    field_intensity,
    field_to_rabi,
    loss_cm_to_rate,
    photon_flux,
    rabi_to_field,
    rate_to_loss_cm,
    wavelength_from_energy,
)
from triwave.verify import (
    OracleResult,
    all_passed,
    check_eq10a_quadrature,
    check_eq6_perturbative,
    check_eq6_self_consistent,
    check_eq7_clamped_drives,
    check_eta_anchor,
    check_wavelength_anchors,
    render_report,
    run_oracles,
)

# A density low enough that the IR field doesn't act back on the medium.
WEAK_CONFIG = "medium.density = 1e14\n"

# The directory with the shipped scenario files.
SCENARIOS_DIRECTORY = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, 'scenarios')

# Initialize a logger for this module.
logger = logging.getLogger(__name__)


def canonical_rates(**overrides):
    """Get the relaxation rates of the canonical scenario."""
    rates = dict(gamma21=7.0, gamma31=7.0, gamma32=7.0, r21=7.0, r31=7.0, r32=7.0, pump=28.0)
    rates.update(overrides)
    return RelaxationSpec(**rates)


def random_params(rng):
    """Get packet parameters with random rates, detunings and complex drives."""
    delta21, delta32 = rng.uniform(-5, 5, size=2)
    e1, e2 = rng.uniform(0.1, 2, size=2) * numpy.exp(2j * math.pi * rng.uniform(size=2))
    return PacketParams(
        detunings=(delta21, delta21 + delta32, delta32),
        relaxation=RelaxationSpec(
            gamma21=rng.uniform(5, 10), gamma31=rng.uniform(5, 10), gamma32=rng.uniform(5, 10),
            r21=rng.uniform(1, 10), r31=rng.uniform(1, 10), r32=rng.uniform(1, 10),
            pump=rng.uniform(5, 40),
        ),
        e1=e1,
        e2=e2,
    )


def make_context(**overrides):
    """Get an :class:`~triwave.analytic.AnalyticContext` close to the canonical scenario."""
    values = dict(
        omega=95.372, omega1=1400.0, omega2=1495.372, d=2.0, d1=0.5, d2=0.5,
        kappa=0.4485, kappa1=0.4485, kappa2=0.4485, G=0.1, G1=0.1, G2=0.1,
        gamma21=7.0, gamma31=7.0, gamma32=7.0, e1=1.0, e2=1.0,
    )
    values.update(overrides)
    return AnalyticContext(**values)


def solve_weak(config_text=""):
    """Solve the self-consistent IR field of a weakly coupled scenario."""
    config = parse_config(WEAK_CONFIG + config_text)
    scenario = scenario_from_config(config)
    solution = self_consistent_ir(scenario.medium, scenario.drives, scenario.ir_mode, scenario.broadening)
    return scenario, solution


class TriwaveTestCase(TestCase):

    """:mod:`unittest` compatible container for `triwave` tests."""

    def test_coerce_numbers(self):
        """Test coercion of positive and nonnegative numbers."""
        assert coerce_positive(1) == 1.0
        assert coerce_positive('2.5') == 2.5
        assert coerce_nonnegative(0) == 0.0
        self.assertRaises(ValidationError, coerce_positive, 0)
        self.assertRaises(ValidationError, coerce_positive, 'abc')
        self.assertRaises(ValidationError, coerce_positive, True)
        self.assertRaises(ValidationError, coerce_positive, float('inf'))
        self.assertRaises(ValidationError, coerce_nonnegative, -1)
        self.assertRaises(ValidationError, coerce_nonnegative, float('nan'))
        # Validation errors are also value errors.
        self.assertRaises(ValueError, coerce_positive, -1)

    def test_coerce_loss(self):
        """Test coercion of cavity losses."""
        assert coerce_loss('150 cm-1') == (150.0, 'cm-1')
        assert coerce_loss('0.45 meV') == (0.45, 'meV')
        assert coerce_loss(150) == (150.0, 'cm-1')
        assert coerce_loss('0.45', unit='meV') == (0.45, 'meV')
        self.assertRaises(ValidationError, coerce_loss, '150 furlongs')
        self.assertRaises(ValidationError, coerce_loss, '1 2 3')
        self.assertRaises(ValidationError, coerce_loss, '-1 cm-1')

    def test_exception_messages(self):
        """Test the extra attributes and messages of the package exceptions."""
        error = ConfigError("Duplicate key drives.e1!", line_numbers=[1, 2])
        assert error.line_numbers == (1, 2)
        assert str(error) == "line 1, 2: Duplicate key drives.e1!"
        error = ConvergenceError("No luck", residual=0.5, iterations=10, oscillating=True, suggested_damping=0.25)
        assert error.oscillating
        assert "try solver.damping = 0.25" in str(error)
        error = DegenerateParametersError("Singular", rates=['r21', 'pump'], index=3)
        assert error.index == 3
        assert "r21, pump" in str(error)
        assert isinstance(error, NumericalError)

    def test_wavelength_anchors(self):
        """Test the conversions between photon energies and wavelengths."""
        assert abs(wavelength_from_energy(98) - 12.65) < 0.005
        assert abs(energy_from_wavelength(60) - 20.66) < 0.005
        assert abs(energy_from_wavelength(wavelength_from_energy(95.372)) - 95.372) < 1e-9
        self.assertRaises(ValidationError, wavelength_from_energy, 0)

    def test_loss_conversion(self):
        """Test the conversion of intensity losses to decay rates and back."""
        kappa = loss_cm_to_rate(150, 95.372, 3.3)
        assert abs(kappa - 0.4485) < 0.001
        assert abs(rate_to_loss_cm(kappa, 3.3) - 150) < 1e-9
        # Doubling the index halves the rate.
        assert abs(loss_cm_to_rate(150, 95.372, 6.6) - kappa / 2) < 1e-12
        self.assertRaises(ValidationError, loss_cm_to_rate, -1, 95.372, 3.3)

    def test_unit_round_trips(self):
        """Test that the unit conversions invert each other for random magnitudes."""
        rng = numpy.random.default_rng(9)
        for _ in range(20):
            energy, alpha = rng.uniform(10, 2000), rng.uniform(1, 3000)
            index, dipole = rng.uniform(1, 4), rng.uniform(0.1, 3)
            assert abs(energy_from_wavelength(wavelength_from_energy(energy)) - energy) < 1e-12 * energy
            assert abs(rate_to_loss_cm(loss_cm_to_rate(alpha, energy, index), index) - alpha) < 1e-12 * alpha
            assert abs(UNITS.angular_to_meV(UNITS.meV_to_angular(energy)) - energy) < 1e-12 * energy
            rabi = rng.uniform(0.01, 100) * numpy.exp(1j * rng.uniform(-math.pi, math.pi))
            assert abs(field_to_rabi(rabi_to_field(rabi, dipole), dipole) - rabi) < 1e-12 * abs(rabi)

    def test_level_scheme(self):
        """Test the level scheme and the rotating frame detunings."""
        levels = LevelScheme(e1=0.0, e2=1400.0, e3=1495.372)
        assert levels.omega21 == 1400.0
        assert levels.omega31 == levels.omega21 + levels.omega32
        self.assertRaises(ValidationError, LevelScheme, e1=0.0, e2=1400.0, e3=1300.0)
        omega1, omega2 = 1399.0, 1494.372
        delta21, delta31, delta32 = closed_loop_detunings(levels, omega1, omega2, omega2 - omega1)
        assert abs(delta21 - 1.0) < 1e-9
        assert abs(delta32) < 1e-9
        assert delta31 == delta21 + delta32
        self.assertRaises(ValidationError, closed_loop_detunings, levels, omega1, omega2, 90.0)

    def test_drive_fields(self):
        """Test validation and detunings of drive fields."""
        levels = LevelScheme(e1=0.0, e2=1400.0, e3=1495.372)
        assert DriveField(role='optical-1', frequency=1398.0).detuning(levels) == 2.0
        assert abs(DriveField(role='ir', frequency=95.0).detuning(levels) - 0.372) < 1e-9
        assert DriveField(role='optical-2', frequency=1495.0, rabi=1).rabi == 1 + 0j
        self.assertRaises(ValidationError, DriveField, role='terahertz', frequency=1.0)
        self.assertRaises(ValidationError, DriveField, role='ir', frequency=0.0)
        self.assertRaises(ValidationError, DriveField, role='ir', frequency=1.0, rabi=complex('nan'))

    def test_coupling_rate(self):
        """Test the magnitude and scaling of the field-matter coupling."""
        g2 = coupling_rate_squared(1e18, 2.0, 95.372, 3.3, 0.1)
        assert 20 < g2 < 45
        assert abs(coupling_rate_squared(2e18, 2.0, 95.372, 3.3, 0.1) / g2 - 2) < 1e-12
        assert abs(coupling_rate_squared(1e18, 2.0, 95.372, 3.3, 0.2) / g2 - 2) < 1e-12
        assert abs(coupling_rate_squared(1e18, 2.0, 95.372, 6.6, 0.1) / g2 - 0.25) < 1e-12
        assert coupling_g2(1e18, 2.0, 95.372, 3.3, 0.1).g2 == g2
        self.assertRaises(ValidationError, coupling_g2, 0, 2.0, 95.372, 3.3, 0.1)

    def test_undriven_populations(self):
        """Test that an undriven packet relaxes to the rate equation populations."""
        state = steady_state(PacketParams(relaxation=canonical_rates()))
        assert abs(state.rho11 - 0.2) < 1e-12
        assert abs(state.rho22 - 0.4) < 1e-12
        assert abs(state.rho33 - 0.4) < 1e-12
        assert abs(state.sigma32) < 1e-12
        assert state.physical

    def test_steady_state_residual(self):
        """Test that steady states are stationary under the master equation."""
        rng = numpy.random.default_rng(42)
        for _ in range(20):
            params = random_params(rng).replace(e=rng.uniform(0.1, 1) * numpy.exp(1j * rng.uniform(0, 6)))
            state = steady_state(params)
            assert abs(state.trace - 1) < 1e-12
            derivative = time_derivative(params, state.density_matrix)
            assert numpy.max(numpy.abs(derivative)) < 1e-8

    def test_steady_system(self):
        """Test that the steady state is the null point of the linear system."""
        params = random_params(numpy.random.default_rng(11))
        matrix, inhomogeneity = build_steady_system(params)
        assert matrix.shape == (8, 8)
        residual = matrix @ steady_state(params).vector + inhomogeneity
        assert numpy.max(numpy.abs(residual)) < 1e-10

    def test_batched_solve(self):
        """Test that solving a batch of packets matches solving them one by one."""
        params = random_params(numpy.random.default_rng(7))
        shifts = (numpy.array([-3.0, 0.0, 2.0]), numpy.array([-4.0, 0.0, 3.0]), numpy.array([-1.0, 0.0, 1.0]))
        batch = solve_packets(params, shifts)
        for index in range(3):
            delta21, delta31, delta32 = params.detunings
            single = steady_state(params.replace(detunings=(
                delta21 + shifts[0][index], delta31 + shifts[1][index], delta32 + shifts[2][index],
            )))
            assert abs(batch.sigma32[index] - single.sigma32) < 1e-12
            assert abs(batch.rho22[index] - single.rho22) < 1e-12

    def test_perturbative_response(self):
        """Test the linearized IR response against central finite differences."""
        rng = numpy.random.default_rng(1)
        step = 1e-4
        for _ in range(10):
            params = random_params(rng)
            response = sigma32_perturbative(params)
            assert abs(response.source - steady_state(params).sigma32) < 1e-12
            real = (steady_state(params.replace(e=step)).sigma32
                    - steady_state(params.replace(e=-step)).sigma32) / (2 * step)
            imaginary = (steady_state(params.replace(e=1j * step)).sigma32
                         - steady_state(params.replace(e=-1j * step)).sigma32) / (2 * step)
            expected_real = response.susceptibility + response.conjugate_susceptibility
            expected_imaginary = 1j * (response.susceptibility - response.conjugate_susceptibility)
            assert abs(real - expected_real) < 1e-5 * abs(expected_real)
            assert abs(imaginary - expected_imaginary) < 1e-5 * abs(expected_imaginary)
            assert abs(response.evaluate(step) - steady_state(params.replace(e=step)).sigma32) < 1e-6

    def test_perturbative_edge_cases(self):
        """Test the linearized IR response without a first optical field and with an IR field."""
        params = PacketParams(relaxation=canonical_rates(), e2=1.0)
        assert abs(sigma32_perturbative(params).source) < 1e-12
        self.assertRaises(ValidationError, sigma32_perturbative, params.replace(e=0.1))

    def test_packet_validation(self):
        """Test validation of packet parameters."""
        rates = canonical_rates()
        self.assertRaises(ValidationError, PacketParams, relaxation=rates, detunings=(1.0, 1.0, 1.0))
        self.assertRaises(ValidationError, PacketParams, relaxation=canonical_rates(gamma21=0), e1=1.0)
        self.assertRaises(ValidationError, RelaxationSpec, gamma21=-1, gamma31=7, gamma32=7)

    def test_degenerate_parameters(self):
        """Test that singular steady-state systems are reported."""
        rates = RelaxationSpec(gamma21=0, gamma31=0, gamma32=0)
        with self.assertRaises(DegenerateParametersError) as context:
            steady_state(PacketParams(relaxation=rates))
        assert 'gamma21' in context.exception.rates
        # A vanishing optical coherence decay has no dressed IR decay.
        params = PacketParams(relaxation=canonical_rates(gamma21=0), e2=1.0)
        self.assertRaises(SingularityError, decay_factors, params)

    def test_zero_field_fixed_point(self):
        """Test that undriven packets have no coherences for random rates."""
        rng = numpy.random.default_rng(21)
        for _ in range(10):
            state = steady_state(random_params(rng).replace(e1=0, e2=0))
            assert state.sigma21 == state.sigma31 == state.sigma32 == 0
            assert abs(state.trace - 1) < 1e-10

    def test_conjugation_symmetry(self):
        """Test that negated detunings and drives e → −e* give the complex conjugate steady state."""
        rng = numpy.random.default_rng(17)
        for _ in range(10):
            params = random_params(rng).replace(e=rng.uniform(0.1, 1) * numpy.exp(1j * rng.uniform(0, 6)))
            mirrored = params.replace(
                detunings=tuple(-delta for delta in params.detunings),
                e1=-numpy.conj(params.e1),
                e2=-numpy.conj(params.e2),
                e=-numpy.conj(params.e),
            )
            state, image = steady_state(params), steady_state(mirrored)
            for name in ('sigma21', 'sigma31', 'sigma32'):
                assert abs(getattr(image, name) - numpy.conj(getattr(state, name))) < 1e-12
            for name in ('rho11', 'rho22', 'rho33'):
                assert abs(getattr(image, name) - getattr(state, name)) < 1e-12
            # The conjugate coherences are separate unknowns of the linear system.
            matrix, inhomogeneity = build_steady_system(params)
            x = numpy.linalg.solve(matrix, -inhomogeneity)
            assert numpy.max(numpy.abs(x[3::2] - numpy.conj(x[2::2]))) < 1e-12
            assert numpy.max(numpy.abs(x[:2].imag)) < 1e-12

    def test_optical_saturation(self):
        """Test the linear and the saturated response of the first optical transition."""
        rates = canonical_rates()
        weak = steady_state(PacketParams(relaxation=rates, e1=0.01)).sigma21
        assert abs(abs(steady_state(PacketParams(relaxation=rates, e1=0.07)).sigma21) / abs(weak) - 7) < 0.07
        susceptibilities = [abs(steady_state(PacketParams(relaxation=rates, e1=e1)).sigma21 / e1)
                            for e1 in numpy.geomspace(0.01, 100, 30)]
        assert numpy.all(numpy.diff(susceptibilities) <= 1e-12 * susceptibilities[0])
        assert susceptibilities[-1] < 0.1 * susceptibilities[0]

    def test_distribution_weights(self):
        """Test the line shapes and their truncated masses."""
        assert abs(distribution_weight(0, 'gaussian') - 1 / math.sqrt(math.pi)) < 1e-15
        assert abs(distribution_weight(0, 'lorentzian') - 1 / math.pi) < 1e-15
        assert abs(distribution_weight(1, 'lorentzian') - 1 / (2 * math.pi)) < 1e-15
        self.assertRaises(ValidationError, distribution_weight, 0, 'homogeneous')
        assert abs(truncated_mass('gaussian', 5) - 1) < 1e-10
        assert abs(truncated_mass('lorentzian', 5) - 0.8743) < 1e-4
        self.assertRaises(ValidationError, truncated_mass, 'voigt', 5)

    def test_quadrature_rules(self):
        """Test the mass of the quadrature rules."""
        params = PacketParams(relaxation=canonical_rates(), e1=1.0, e2=1.0)
        assert quadrature_rule(BroadeningSpec(kind='homogeneous')).scheme == 'point'
        gaussian = BroadeningSpec(kind='gaussian', u21=5.0, u32=5.0)
        rule = quadrature_rule(gaussian)
        assert rule.scheme == 'base'
        assert abs(rule.mass - 1) < 1e-12
        panels = quadrature_rule(BroadeningSpec(kind='gaussian', u21=700.0, u32=70.0), params)
        assert panels.scheme == 'panels'
        assert abs(panels.mass - truncated_mass('gaussian', 5)) < 1e-9
        lorentzian = quadrature_rule(BroadeningSpec(kind='lorentzian', u21=700.0, u32=70.0), params)
        # Lorentzian averages aren't renormalized to the truncated range.
        assert abs(lorentzian.mass - truncated_mass('lorentzian', 5)) < 1e-6

    def test_broadening_validation(self):
        """Test validation of the broadening parameters."""
        self.assertRaises(ValidationError, BroadeningSpec, kind='voigt')
        self.assertRaises(ValidationError, BroadeningSpec, kind='homogeneous', u21=1.0)
        self.assertRaises(ValidationError, BroadeningSpec, kind='gaussian')
        self.assertRaises(ValidationError, BroadeningSpec, kind='gaussian', u21=1.0, u32=1.0, u31=3.0)
        self.assertRaises(ValidationError, BroadeningSpec, kind='gaussian', u21=1.0, nodes=8)
        self.assertRaises(ValidationError, BroadeningSpec, kind='gaussian', u21=1.0, cutoff=3)
        assert BroadeningSpec(kind='gaussian', u21=2.0, u32=1.0).u31 == 3.0

    def test_homogeneous_average(self):
        """Test that a homogeneous ensemble equals its single packet."""
        params = PacketParams(relaxation=canonical_rates(), e1=1.0, e2=1.0, e=0.1)
        result = ensemble_average(params, BroadeningSpec(kind='homogeneous'))
        assert result.value == steady_state(params).sigma32
        assert result.error_estimate == 0

    def test_narrow_line_limit(self):
        """Test that a vanishingly narrow inhomogeneous line approaches the homogeneous result."""
        params = PacketParams(relaxation=canonical_rates(), e1=1.0, e2=1.0, e=0.1)
        packet = steady_state(params).sigma32
        result = ensemble_average(params, BroadeningSpec(kind='gaussian', u21=1e-6, u32=1e-6))
        assert abs(result.value - packet) < 1e-5 * abs(packet)

    def test_inhomogeneous_average(self):
        """Test the error estimate and the linearized ensemble average."""
        params = PacketParams(relaxation=canonical_rates(), e1=1.0, e2=1.0)
        broadening = BroadeningSpec(kind='gaussian', u21=70.0, u32=7.0)
        result = ensemble_average(params, broadening, linearize=True)
        assert result.rule.scheme == 'panels'
        assert result.error_estimate < 1e-3 * abs(result.value)
        assert abs(result.sigma32 - result.value) < 1e-15
        assert result.susceptibility != 0
        assert len(result.populations) == 3
        assert abs(sum(result.populations) - result.rule.mass) < 1e-9

    def test_lorentzian_convolution(self):
        """Test the linear optical response of a Lorentzian line against the convolved line width."""
        params = PacketParams(relaxation=canonical_rates(), e1=1e-3)
        result = ensemble_average(params, BroadeningSpec(kind='lorentzian', u21=700.0, u32=70.0), quantity='sigma21')
        # A Lorentzian convolved with a Lorentzian adds the widths.
        expected = 1j * params.e1 * steady_state(params).n12 / (7.0 + 700.0)
        assert abs(result.value - expected) < 0.02 * abs(expected)

    def test_symmetric_line_parity(self):
        """Test that drives at the center of a symmetric line give a parity symmetric average."""
        params = PacketParams(relaxation=canonical_rates(), e1=1.0, e2=1.0)
        for kind in ('gaussian', 'lorentzian'):
            broadening = BroadeningSpec(kind=kind, u21=70.0, u32=7.0)
            optical = ensemble_average(params, broadening, quantity='sigma21').value
            assert abs(optical.real) < 1e-9 * abs(optical)
            source = ensemble_average(params, broadening).value
            assert abs(source.imag) < 1e-9 * abs(source)

    def test_monotone_broadening(self):
        """Test that a wider line responds weaker at its center."""
        params = PacketParams(relaxation=canonical_rates(), e1=1e-3)
        responses = [abs(ensemble_average(params, BroadeningSpec(kind='gaussian', u21=u21, u32=0.1 * u21),
                                          quantity='sigma21').value) for u21 in (1.0, 3.0, 10.0, 30.0, 100.0, 300.0)]
        assert all(a > b for a, b in zip(responses, responses[1:]))

    def test_refinement_consistency(self):
        """Test that refining across the spectral holes agrees with a ten times denser plain rule."""
        params = PacketParams(relaxation=canonical_rates(), e1=70.0, e2=70.0)
        refined = holeburning_average(params, BroadeningSpec(kind='gaussian', u21=700.0, u32=70.0))
        plain = holeburning_average(params, BroadeningSpec(kind='gaussian', u21=700.0, u32=70.0,
                                                           nodes=1290, refine=False))
        assert refined.rule.scheme == plain.rule.scheme == 'panels'
        assert len(refined.nodes) != len(plain.nodes)
        for name in ('n12', 'n13', 'n23'):
            assert abs(refined.average(name) - plain.average(name)) < 1e-4

    def test_hole_burning(self):
        """Test spectral hole burning by strong optical drives."""
        params = PacketParams(relaxation=canonical_rates(), e1=70.0, e2=70.0)
        broadening = BroadeningSpec(kind='gaussian', u21=700.0, u32=70.0)
        # A dominant drive empties the packets it's resonant with.
        dominant = holeburning_average(params.replace(e2=7.0), broadening, strong_drive=False)
        assert dominant.hole_depth('n12') > 0.5
        assert dominant.hole_depth('n12') > dominant.hole_depth('n13')
        # Equal drives trap population in the dark superposition of levels 2
        # and 3, the dip then stays at 3/8 of the unsaturated inversion.
        result = holeburning_average(params, broadening)
        assert abs(result.hole_depth('n12') - 0.375) < 0.01
        assert abs(result.hole_depth('n12') - holeburning_average(params.replace(e1=140.0, e2=140.0), BroadeningSpec(
            kind='gaussian', u21=1400.0, u32=140.0)).hole_depth('n12')) < 0.01
        profile = result.profile
        assert set(profile) == set(['xi', 'weight', 'rho11', 'rho22', 'rho33', 'n12', 'n13', 'n23'])
        assert len(profile['xi']) == len(result.nodes)
        assert numpy.all(numpy.diff(profile['xi']) > 0)
        # Weak drives don't burn holes.
        self.assertRaises(RegimeError, holeburning_average, params.replace(e1=1.0, e2=1.0), broadening)
        # Nor does a homogeneous line.
        self.assertRaises(RegimeError, holeburning_average, params, BroadeningSpec(kind='homogeneous'))
        # The coefficients are relative to a positive u32.
        self.assertRaises(ValidationError, holeburning_coefficients, params,
                          BroadeningSpec(kind='gaussian', u21=700.0))

    def test_holeburning_coefficients(self):
        """Test the coefficients extracted from a hole burning quadrature."""
        params = PacketParams(relaxation=canonical_rates(), e1=70.0, e2=70.0)
        c1, c2 = holeburning_coefficients(params, BroadeningSpec(kind='lorentzian', u21=700.0, u32=70.0))
        # Reference values from an independent midpoint sum over 28000 packets.
        assert abs(c1 - 6.210) < 0.03 * 6.210
        assert abs(c2 - 0.2746) < 0.03 * 0.2746
        # Three times stronger drives over a three times wider line.
        params = params.replace(e1=210.0, e2=210.0)
        c1, c2 = holeburning_coefficients(params, BroadeningSpec(kind='lorentzian', u21=2100.0, u32=210.0))
        assert abs(c1 - 11.26) < 0.03 * 11.26
        assert abs(c2 - 0.4539) < 0.03 * 0.4539

    def test_eta_parameter(self):
        """Test the efficiency parameter."""
        assert eta_parameter('150 cm-1', 0.1, '150 cm-1', 0.1) == 1.0
        assert abs(eta_parameter('300 cm-1', 0.1, '150 cm-1', 0.1) - 2.0) < 1e-12
        assert abs(eta_parameter(0.9, 0.2, 0.45, 0.1) - 1.0) < 1e-12
        self.assertRaises(ValidationError, eta_parameter, '150 cm-1', 0.1, '0.45 meV', 0.1)
        # A bare number and a loss with a unit can't be compared either.
        self.assertRaises(ValidationError, eta_parameter, 0.9, 0.1, '150 cm-1', 0.1)
        self.assertRaises(ValidationError, eta_parameter, '150 cm-1', 0.1, 0.45, 0.1)
        self.assertRaises(ValidationError, eta_parameter, '150 cm-1', 0.1, '0 cm-1', 0.1)
        assert abs(make_context(kappa1=0.897).eta - 2.0) < 1e-12

    def test_weak_field_closed_form(self):
        """Test the weak-field closed form against the linearized packet solver."""
        assert check_eq6_perturbative(parse_config(""), numpy.random.default_rng(3), count=10).passed
        # A huge coupling drives the result outside its regime.
        ctx = make_context()
        result = eq6_ir_field(ctx, 1e6, -0.2, -0.2)
        assert not result.valid
        assert result.flags

    def test_gamma_factors(self):
        """Test the complex decay factors of the weak-field solution."""
        ctx = make_context(e1=0, e2=0)
        gamma21, gamma31, gamma32, gamma_tilde = gamma_factors(ctx, shifts=(2.0, 3.0, 1.0))
        assert gamma21 == 7 + 2j
        assert gamma31 == 7 + 3j
        assert gamma_tilde == gamma32 == 7 + 1j
        # Drives dress the IR coherence.
        _, _, gamma32, gamma_tilde = gamma_factors(ctx, drives=(1.0, 2.0))
        assert abs(gamma_tilde - (7 + 1 / 7.0 + 4 / 7.0)) < 1e-12
        # Arrays of shifts give arrays of factors.
        factors = gamma_factors(ctx, shifts=(numpy.zeros(4), numpy.ones(4), numpy.ones(4)))
        assert all(numpy.shape(factor) == (4,) for factor in factors)

    def test_homogeneous_closed_form(self):
        """Test the closed form of a homogeneous line."""
        ctx = make_context(e1=0.2, e2=0.3)
        # With η = 1 both bracket terms follow from the frequency and dipole ratios.
        expected = 0.2 * 0.3 / 7.0 * 16 * (95.372 / 1400.0 + 95.372 / 1495.372)
        assert abs(eq7_ir_field_homogeneous(ctx) - expected) < 1e-12

    def test_inhomogeneous_closed_form(self):
        """Test the closed form of an inhomogeneous line below saturation."""
        assert check_eq10a_quadrature(parse_config("")).passed
        ctx = make_context(u21=700.0, u32=70.0, e1=0.5, e2=0.5)
        result = eq10a_eq11_inhomogeneous(ctx)
        assert result.valid
        # The intensity ratio is consistent with the amplitude.
        expected = (ctx.d1 / ctx.d) ** 2 * result.value ** 2 / abs(ctx.e1) ** 2
        assert abs(result.intensity_ratio - expected) < 1e-9 * expected
        # Widths that aren't much larger than γ are flagged.
        assert not eq10a_eq11_inhomogeneous(make_context(u21=20.0, u32=20.0)).valid
        self.assertRaises(ValidationError, eq10a_eq11_inhomogeneous, make_context(u21=20.0))

    def test_holeburning_closed_form(self):
        """Test the preconditions of the hole burning closed form."""
        ctx = make_context(u21=1000.0, u32=100.0, e1=70.0, e2=70.0)
        value = eq13_ir_field_holeburning(ctx, canonical_rates())
        assert value > 0
        with self.assertRaises(ValidationError) as context:
            eq13_ir_field_holeburning(make_context(e1=1.0, e2=2.0), canonical_rates(r32=21.0))
        message = str(context.exception)
        assert '|e1|' in message
        assert 'r32' in message
        assert 'u32 must be positive' in message

    def test_holeburning_bracket(self):
        """Test the bracket of the hole burning closed form in its two limiting cases."""
        rates = canonical_rates()
        prefactor = 70.0 * 70.0 * 1000.0 / (7.0 * 100.0)
        # Equal bracket terms leave 0.9 − 0.1 of either one.
        ctx = make_context(u21=1000.0, u32=100.0, e1=70.0, e2=70.0, kappa2=0.4485 * 1495.372 / 1400.0)
        assert abs(ctx.term1 - ctx.term2) < 1e-12 * ctx.term1
        assert abs(eq13_ir_field_holeburning(ctx, rates) - 0.8 * prefactor * ctx.term1) < 1e-9 * prefactor * ctx.term1
        # A lossless second optical mode leaves the first term only.
        ctx = make_context(u21=1000.0, u32=100.0, e1=70.0, e2=70.0, kappa2=1e-12)
        assert abs(eq13_ir_field_holeburning(ctx, rates) - 0.9 * prefactor * ctx.term1) < 1e-9 * prefactor * ctx.term1
        # Numerically extracted coefficients can be substituted.
        value = eq13_ir_field_holeburning(ctx, rates, coefficients=(6.21, 0.27))
        assert abs(value - 6.21 * prefactor * ctx.term1) < 1e-9 * value

    def test_bilinear_scaling(self):
        """Test that the closed forms scale with the product of the drive magnitudes."""
        rng = numpy.random.default_rng(13)
        widths = dict(u21=1000.0, u32=100.0)
        for _ in range(10):
            a, b = rng.uniform(0.1, 3, size=2)
            reference, scaled = make_context(e1=0.2, e2=0.3), make_context(e1=0.2 * a, e2=-0.3 * b)
            assert abs(eq7_ir_field_homogeneous(scaled) - a * b * eq7_ir_field_homogeneous(reference)) < 1e-12
            reference, scaled = make_context(e1=0.2, e2=0.3, **widths), make_context(e1=0.2j * a, e2=0.3 * b, **widths)
            expected = a * b * eq10a_eq11_inhomogeneous(reference).value
            assert abs(eq10a_eq11_inhomogeneous(scaled).value - expected) < 1e-12 * expected
            rates = canonical_rates()
            reference = make_context(e1=70.0, e2=70.0, **widths)
            scaled = make_context(e1=70.0 * a, e2=70.0 * a, **widths)
            expected = a * a * eq13_ir_field_holeburning(reference, rates)
            assert abs(eq13_ir_field_holeburning(scaled, rates) - expected) < 1e-12 * expected

    def test_phase_covariance(self):
        """Test that the weak-field sum follows the phase difference of the optical drives."""
        rng = numpy.random.default_rng(19)
        reference = eq6_ir_field(make_context(e1=0.3, e2=0.4), 30.0, -0.2, -0.1).value
        for _ in range(10):
            phi1, phi2 = rng.uniform(-math.pi, math.pi, size=2)
            ctx = make_context(e1=0.3 * numpy.exp(1j * phi1), e2=0.4 * numpy.exp(1j * phi2))
            value = eq6_ir_field(ctx, 30.0, -0.2, -0.1).value
            assert abs(value - reference * numpy.exp(1j * (phi2 - phi1))) < 1e-12 * abs(reference)

    def test_saturation_scale(self):
        """Test the saturation field scale."""
        assert abs(saturation_scale(14.0, 0.5) / saturation_scale(7.0, 0.5) - 4) < 1e-12
        assert abs(saturation_scale(7.0, 1.0) / saturation_scale(7.0, 0.5) - 0.25) < 1e-12
        self.assertRaises(ValidationError, saturation_scale, 0, 0.5)

    def test_manley_rowe_cap(self):
        """Test the photon flux cap."""
        assert manley_rowe_cap(5e20, 2e20, 3e20) == (2e20, True)
        assert manley_rowe_cap(1e20, 2e20, 3e20) == (1e20, False)
        rng = numpy.random.default_rng(23)
        for fluxes in rng.uniform(0, 1e21, size=(10, 3)):
            capped, applied = manley_rowe_cap(*fluxes)
            assert manley_rowe_cap(capped, *fluxes[1:]) == (capped, False)
        self.assertRaises(ValidationError, manley_rowe_cap, -1, 2e20, 3e20)

    def test_phase_matching(self):
        """Test the phase matching helpers."""
        mismatch, matched = phase_mismatch(1.0, 1.5, 0.5, 1000.0)
        assert abs(mismatch) < 1e-12
        assert matched
        mismatch, matched = phase_mismatch(1.0, 1.5, 0.6, 1000.0)
        assert abs(mismatch - 0.1) < 1e-12
        assert not matched
        assert abs(matched_ir_index(3.3, 1400.0, 3.4, 1495.0, 95.0) - (3.4 * 1495.0 - 3.3 * 1400.0) / 95.0) < 1e-12

    def test_cavity_modes(self):
        """Test construction and validation of cavity modes."""
        mode = CavityModeSpec.from_loss(95.372, 150, 3.3, 0.1)
        assert abs(mode.kappa - loss_cm_to_rate(150, 95.372, 3.3)) < 1e-15
        self.assertRaises(ValidationError, CavityModeSpec, frequency=95.0, kappa=0.4, index=3.3, confinement=1.5)
        self.assertRaises(ValidationError, CavityModeSpec, frequency=95.0, kappa=0, index=3.3, confinement=0.1)

    def test_mode_steady_field(self):
        """Test the steady amplitude of a driven cavity mode."""
        mode = CavityModeSpec(frequency=95.0, kappa=0.5, index=3.3, confinement=0.1)
        assert mode_steady_field(1j, mode, 95.0) == 2j
        detuned = mode_steady_field(1.0, mode, 94.5)
        assert abs(detuned - 1 / (0.5 + 0.5j)) < 1e-12
        assert abs(detuned) < abs(mode_steady_field(1.0, mode, 95.0))
        assert abs(abs(mode_steady_field(1.0, mode, 95.5)) - abs(detuned)) < 1e-12

    def test_self_consistent_weak_coupling(self):
        """Test the self-consistent IR field against the weak-field closed form."""
        scenario, solution = solve_weak()
        assert solution.converged
        assert solution.residual < 1e-10
        response = sigma32_perturbative(scenario.packet)
        closed = eq6_ir_field(scenario.context, solution.g2, response.state.n12, response.state.n13).value
        assert abs(abs(closed) - abs(solution.e)) < 0.01 * abs(solution.e)
        assert not solution.cap_applied
        assert solution.photon_flux == solution.raw_photon_flux

    def test_fixed_point_certificate(self):
        """Test that converged IR fields reproduce themselves under the field map."""
        for config in (parse_config(WEAK_CONFIG), parse_config("")):
            scenario = scenario_from_config(config)
            solution = self_consistent_ir(scenario.medium, scenario.drives, scenario.ir_mode, scenario.broadening)
            assert solution.converged
            state = steady_state(scenario.packet.replace(e=solution.e))
            image = mode_steady_field(1j * solution.g2 * state.sigma32, scenario.ir_mode, solution.frequency)
            assert abs(image - solution.e) < 1e-8 * abs(solution.e)

    def test_self_consistent_oracle(self):
        """Test the weak-field closed form against self-consistent solutions with random complex drives."""
        result = check_eq6_self_consistent(parse_config(""), numpy.random.default_rng(1), count=10)
        assert result.passed
        assert 'over 10 parameter sets' in result.measured

    def test_convergence_failure(self):
        """Test that an iteration limit that's too small is reported."""
        scenario = scenario_from_config(parse_config(WEAK_CONFIG))
        with self.assertRaises(ConvergenceError) as context:
            self_consistent_ir(scenario.medium, scenario.drives, scenario.ir_mode, scenario.broadening,
                               max_iterations=2)
        assert context.exception.iterations == 2
        self.assertRaises(ValidationError, self_consistent_ir, scenario.medium, scenario.drives,
                          scenario.ir_mode, scenario.broadening, damping=0)

    def test_output_power(self):
        """Test the output power estimate."""
        mode = CavityModeSpec.from_loss(95.372, 150, 3.3, 0.1)
        intensity = field_intensity(rabi_to_field(0.6, 2.0), 3.3)
        solution = MagicMock(photon_flux=photon_flux(intensity, 95.372), frequency=95.372)
        power = output_power(solution, mode, 20.0, 0.3)
        assert 5 < power < 15
        assert abs(output_power(solution, mode, 20.0, 0.15) - power / 2) < 1e-12 * power
        assert output_power(solution, mode, 20.0, 0) == 0
        self.assertRaises(ValidationError, output_power, solution, mode, 20.0, 1.5)
        # The canonical scenario emits milliwatts.
        record = run_scenario(parse_config(""))
        assert 1 <= record['power_mw'] <= 100
        assert abs(record['power_mw'] - 8.486) < 0.01
        assert abs(record['e_abs'] - 0.5683) < 1e-3

    def test_gain_clamping(self):
        """Test that clamped optical fields have their gain equal to their loss."""
        # With the canonical rates the second mode suppresses the first one.
        with self.assertRaises(RegimeError) as context:
            scenario_from_config(parse_config("drives.mode = clamp\n"))
        assert "Only optical mode 2 lases" in str(context.exception)
        with codecs.open(os.path.join(SCENARIOS_DIRECTORY, 'coexistence.conf'), 'r', 'UTF-8') as handle:
            scenario = scenario_from_config(parse_config(handle.read(), 'coexistence.conf'))
        drives = scenario.drives
        medium = scenario.medium
        state = steady_state(scenario.packet)
        couplings = (
            coupling_g2(medium.density, 0.5, drives.optical1.frequency, 3.3, 0.1).g2,
            coupling_g2(medium.density, 0.5, drives.optical2.frequency, 3.3, 0.1).g2,
        )
        gain1 = (1j * couplings[0] * state.sigma21 / drives.optical1.rabi).real
        gain2 = (1j * couplings[1] * state.sigma31 / drives.optical2.rabi).real
        assert abs(gain1 / drives.mode1.kappa - 1) < 1e-5
        assert abs(gain2 / drives.mode2.kappa - 1) < 1e-5
        assert abs(abs(drives.optical1.rabi) - 5.925) < 0.01
        assert abs(abs(drives.optical2.rabi) - 5.353) < 0.01
        # The clamped amplitudes don't depend on the initial guess.
        again = clamp_drives(medium, drives.with_amplitudes(1.0, 1.0), scenario.broadening)
        assert abs(again.optical1.rabi - drives.optical1.rabi) < 1e-6
        # Below threshold there's nothing to clamp.
        below = parse_config("drives.mode = clamp\nmedium.density = 1e10\n")
        self.assertRaises(RegimeError, scenario_from_config, below)
        # Clamping needs the optical modes.
        without_modes = DriveSet(optical1=drives.optical1, optical2=drives.optical2)
        self.assertRaises(ValidationError, clamp_drives, medium, without_modes, scenario.broadening)

    def test_clamped_drives_oracle(self):
        """Test the homogeneous closed form against the weak-field sum at clamped optical drives."""
        result = check_eq7_clamped_drives(parse_config(""), numpy.random.default_rng(5))
        assert result.passed
        assert 'over 20 clamped scenarios' in result.measured

    def test_config_defaults(self):
        """Test that an empty configuration gives the canonical scenario."""
        config = parse_config("")
        assert config['medium.density'] == 1e18
        assert config['ir.loss'] == (150.0, 'cm-1')
        assert config['broadening.u31'] == 0.0
        # Derived keys have no default value of their own.
        assert SCHEMA['broadening.u31'].default is None
        assert SCHEMA['optical1.frequency'].default is None
        assert SCHEMA['drives.e1'].default == 1.0
        assert set(config.defaulted_keys) == set(SCHEMA)
        with codecs.open(os.path.join(SCENARIOS_DIRECTORY, 'canonical.conf'), 'r', 'UTF-8') as handle:
            shipped = parse_config(handle.read(), 'canonical.conf')
        assert shipped.values == config.values
        # Only the derived keys are left out of the shipped file.
        assert set(shipped.defaulted_keys) == set(k for k in SCHEMA if SCHEMA[k].default is None)

    def test_config_errors(self):
        """Test that invalid configurations are rejected with line numbers."""
        with self.assertRaises(ConfigError) as context:
            parse_config("drives.e1 = 1\ndrives.e1 = 2\n")
        assert context.exception.line_numbers == (1, 2)
        assert str(context.exception).startswith("line 1, 2: ")
        for text in ("foo.bar = 1\n",
                     "drives.e1 = -1\n",
                     "medium.density = 0\n",
                     "drives.e1 1\n",
                     "drives.e1 =\n",
                     "drives = 1\n",
                     "broadening.kind = voigt\n",
                     "broadening.kind = gaussian\n",
                     "optical1.loss = 150 furlongs\n",
                     "solver.max_iterations = 1.5\n"):
            self.assertRaises(ConfigError, parse_config, text)
        # Comments and blank lines are ignored.
        config = parse_config("# Comment.\n\ndrives.e1 = 0.5  # Trailing comment.\n")
        assert config['drives.e1'] == 0.5

    def test_config_provenance(self):
        """Test that every defaulted key is logged."""
        with patch.object(triwave.config.logger, 'notice') as notice:
            config = parse_config("drives.e1 = 0.5\noptical1.loss = 0.45 meV\n")
        assert notice.call_count == len(SCHEMA) - 2
        assert 'drives.e1' not in config.defaulted_keys
        assert config['optical1.loss'] == (0.45, 'meV')

    def test_config_replace(self):
        """Test replacing configuration values."""
        config = parse_config("optical1.loss = 0.45 meV\n")
        assert config.replace('optical1.loss', 0.9)['optical1.loss'] == (0.9, 'meV')
        assert config.replace('ir.loss', 300)['ir.loss'] == (300.0, 'cm-1')
        # A defaulted u31 follows the other widths.
        widened = config.replace('broadening.u21', 5.0).replace('broadening.u32', 2.0)
        assert widened['broadening.u31'] == 7.0
        assert 'broadening.u21' not in widened.defaulted_keys
        # An explicit u31 stays put.
        explicit = parse_config("broadening.u31 = 9\n").replace('broadening.u21', 5.0)
        assert explicit['broadening.u31'] == 9.0
        assert config['drives.e1'] == 1.0
        self.assertRaises(ConfigError, config.replace, 'nope.key', 1)
        self.assertRaises(ConfigError, config.replace, 'drives.e1', -1)
        assert 'medium.density = 1e+18' in config.rendered

    def test_sweep_spec(self):
        """Test sweep specifications."""
        assert numpy.allclose(SweepSpec(key='drives.e1', start=0.1, stop=1, steps=3).values(), [0.1, 0.55, 1.0])
        assert numpy.allclose(SweepSpec(key='drives.e1', start=1, stop=100, steps=3, log=True).values(),
                              [1.0, 10.0, 100.0])
        self.assertRaises(ValidationError, SweepSpec, key='drives.e1', start=0, stop=1, steps=1)
        self.assertRaises(ValidationError, SweepSpec, key='nope.key', start=0, stop=1, steps=3)
        self.assertRaises(ValidationError, SweepSpec, key='broadening.kind', start=0, stop=1, steps=3)
        self.assertRaises(ValidationError, SweepSpec, key='drives.e1', start=0, stop=1, steps=3, log=True)

    def test_run_scenario(self):
        """Test a single scenario run in a weakly coupled medium."""
        record = run_scenario(parse_config(WEAK_CONFIG))
        assert tuple(record) == COLUMNS
        assert record['eta'] == 1.0
        assert record['phase_matched']
        assert record['ir_inverted'] == (record['n23_min'] < 0)
        assert record['e_abs'] > 0
        assert abs(record['eq6_abs'] - record['e_abs']) < 0.01 * record['e_abs']
        assert record['eq7_abs'] > 0
        assert record['eq10a_abs'] is None
        assert record['eq13_abs'] is None
        assert record['power_mw'] > 0

    def test_inversionless_generation(self):
        """Test that an IR field is generated without inversion of the IR transition."""
        scenario, solution = solve_weak("relaxation.r32 = 21\n")
        assert solution.n23_min >= 0
        assert abs(solution.e) > 0

    def test_zero_drives(self):
        """Test that there's no IR field without optical fields."""
        record = run_scenario(parse_config(WEAK_CONFIG + "drives.e1 = 0\ndrives.e2 = 0\n"))
        assert record['e_abs'] == 0
        assert record['photon_flux'] == 0
        assert record['power_mw'] == 0
        assert record['eq6_abs'] == 0

    def test_detuned_ir_mode(self):
        """Test that the weak-field sum follows the IR mode off resonance."""
        resonant = run_scenario(parse_config(WEAK_CONFIG))
        kappa = loss_cm_to_rate(150, 95.372, 3.3)
        detuned = run_scenario(parse_config(WEAK_CONFIG + "ir.frequency = %r\n" % (1495.372 - 1400.0 + kappa)))
        # A detuning of κ halves the intensity.
        assert abs(detuned['e_abs'] / resonant['e_abs'] - 2 ** -0.5) < 1e-6
        assert abs(detuned['eq6_abs'] / resonant['eq6_abs'] - 2 ** -0.5) < 1e-6
        assert abs(detuned['eq6_abs'] - detuned['e_abs']) < 1e-6 * detuned['e_abs']

    def test_sweep_scaling(self):
        """Test that the IR field scales linearly with e1 and e2 and inversely with the IR loss."""
        config = parse_config(WEAK_CONFIG)
        for key in ('drives.e1', 'drives.e2'):
            rows = run_sweep(config, SweepSpec(key=key, start=0.01, stop=0.1, steps=3, log=True))
            assert list(rows[0])[0] == key
            slope = math.log(rows[-1]['e_abs'] / rows[0]['e_abs']) / math.log(10)
            assert abs(slope - 1) < 1e-3
        rows = run_sweep(config, SweepSpec(key='ir.loss', start=150, stop=1500, steps=2))
        slope = math.log(rows[-1]['e_abs'] / rows[0]['e_abs']) / math.log(10)
        assert abs(slope + 1) < 1e-3

    def test_scenario_error_labels(self):
        """Test that scenario errors name the scenario they come from."""
        config = parse_config(WEAK_CONFIG + "solver.max_iterations = 1\n", 'bad.conf')
        with self.assertRaises(ConvergenceError) as context:
            run_scenario(config)
        assert str(context.exception).startswith("bad.conf: ")

    def test_render_table(self):
        """Test rendering tables as CSV and JSON."""
        table = [dict(a=1, b=0.1, c=True), dict(a=2, b=float('nan'), c=False, d=None)]
        text = render_table(table, 'csv')
        assert text.endswith("\n") and "\r" not in text
        rows = list(csv.reader(io.StringIO(text)))
        assert rows == [['a', 'b', 'c', 'd'], ['1', '0.1', 'true', ''], ['2', 'nan', 'false', '']]
        decoded = json.loads(render_table(table, 'json'))
        assert decoded[0] == dict(a=1, b=0.1, c=True, d=None)
        assert decoded[1]['b'] is None
        self.assertRaises(ValidationError, render_table, [], 'csv')
        self.assertRaises(ValidationError, render_table, table, 'xml')

    def test_emit(self):
        """Test writing tables to files."""
        table = [dict(x=1.5)]
        with TemporaryDirectory() as directory:
            filename = os.path.join(directory, 'results', 'table.csv')
            text = emit(table, 'csv', filename)
            with codecs.open(filename, 'r', 'UTF-8') as handle:
                assert handle.read() == text
            # No temporary files are left behind.
            assert os.listdir(os.path.dirname(filename)) == ['table.csv']
        # For the purpose of this test we assume that /proc isn't writable.
        self.assertRaises(ValidationError, emit, table, 'csv', '/proc/triwave-test/table.csv')

    def test_cli_usage(self):
        """Test the usage message of the command line interface."""
        for arguments in ((), ('--help',)):
            returncode, output = run_cli(main, *arguments)
            assert returncode == 0
            assert "Usage: triwave" in output
        returncode, output = run_cli(main, 'simulate', merged=True)
        assert returncode == 1
        returncode, output = run_cli(main, '--format=xml', 'run', merged=True)
        assert returncode == 1
        returncode, output = run_cli(main, 'sweep', '--param=drives.e1', merged=True)
        assert returncode == 1

    def test_cli_run(self):
        """Test the ``run`` command and that its output is reproducible."""
        with TemporaryDirectory() as directory:
            config_file = os.path.join(directory, 'weak.conf')
            with open(config_file, 'w') as handle:
                handle.write(WEAK_CONFIG)
            contents = []
            for name in ('first.csv', 'second.csv'):
                output_file = os.path.join(directory, name)
                returncode, output = run_cli(main, '--config=%s' % config_file, '--output=%s' % output_file, 'run')
                assert returncode == 0
                with open(output_file, 'rb') as handle:
                    contents.append(handle.read())
            assert contents[0] == contents[1]
            assert contents[0].splitlines()[0].decode('UTF-8') == ",".join(COLUMNS)
            returncode, output = run_cli(main, '-c', config_file, '-f', 'json', 'run')
            assert returncode == 0
            assert json.loads(output)[0]['eta'] == 1.0
            returncode, output = run_cli(main, '-c', config_file, '-p', 'drives.e1',
                                         '--from=0.5', '--to=1', '-n', '2', 'sweep')
            assert returncode == 0
            assert len(output.strip().splitlines()) == 3

    def test_cli_canonical_golden(self):
        """Test the ``run`` command on the shipped canonical scenario against its recorded output."""
        with open(os.path.join(SCENARIOS_DIRECTORY, 'canonical.csv')) as handle:
            expected = list(csv.reader(handle))
        returncode, output = run_cli(main, '-c', os.path.join(SCENARIOS_DIRECTORY, 'canonical.conf'), 'run')
        assert returncode == 0
        actual = list(csv.reader(io.StringIO(output)))
        assert actual[0] == expected[0] == list(COLUMNS)
        assert len(actual) == len(expected) == 2
        for name, got, recorded in zip(expected[0], actual[1], expected[1]):
            if name == 'residual':
                # Only the last bits of the converged iterate differ between machines.
                assert float(got) < 1e-10
            elif name == 'delta_k':
                assert abs(float(got)) < 1e-9
            elif recorded in ('', 'true', 'false') or name == 'iterations':
                assert got == recorded, name
            else:
                assert abs(float(got) - float(recorded)) <= 1e-6 * abs(float(recorded)), name

    def test_cli_errors(self):
        """Test the exit status of the command line interface on errors."""
        with TemporaryDirectory() as directory:
            invalid = os.path.join(directory, 'invalid.conf')
            with open(invalid, 'w') as handle:
                handle.write("drives.e1 = -1\n")
            returncode, output = run_cli(main, '--config=%s' % invalid, 'run', merged=True)
            assert returncode == 1
            assert "line 1" in output
            returncode, output = run_cli(main, '--config=%s' % os.path.join(directory, 'missing.conf'),
                                         'run', merged=True)
            assert returncode == 1
            stuck = os.path.join(directory, 'stuck.conf')
            with open(stuck, 'w') as handle:
                handle.write(WEAK_CONFIG + "solver.max_iterations = 1\n")
            returncode, output = run_cli(main, '--config=%s' % stuck, 'run', merged=True)
            assert returncode == 2
        # Bugs aren't reported as invalid input.
        with patch('triwave.cli.run_scenario', side_effect=KeyError('oops')):
            returncode, output = run_cli(main, 'run', merged=True)
            assert returncode == EXIT_INTERNAL
            assert returncode not in (EXIT_INVALID, EXIT_NUMERICAL)

    def test_cli_verify(self):
        """Test the exit status of the ``verify`` command."""
        passed = OracleResult(name='good', measured="1", criterion="1", passed=True)
        failed = OracleResult(name='bad', measured="2", criterion="1", passed=False)
        reported = OracleResult(name='odd', measured="3", criterion="1", passed=False, required=False)
        with patch('triwave.cli.run_oracles', return_value=[passed, reported]):
            returncode, output = run_cli(main, 'verify')
            assert returncode == 0
            assert 'deviates' in output
        with patch('triwave.cli.run_oracles', return_value=[passed, failed]):
            returncode, output = run_cli(main, 'verify', merged=True)
            assert returncode == 2
            assert 'FAIL' in output
        assert all_passed([passed, reported])
        assert not all_passed([passed, failed])
        assert 'good' in render_report([passed], colors=True)

    def test_oracle_anchors(self):
        """Test the oracles that don't need a scenario."""
        assert check_eta_anchor().passed
        assert check_wavelength_anchors().passed

    def test_oracle_suite(self):
        """Test that the built-in oracle suite passes."""
        results = run_oracles(parse_config(""), seed=0)
        by_name = dict((result.name, result) for result in results)
        assert not by_name['eq13-coefficients'].required
        for result in results:
            logger.info("Oracle %s: %s (%s)", result.name, result.status, result.measured)
        assert all_passed(results)
