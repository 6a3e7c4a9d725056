# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
The built-in oracle suite behind ``triwave verify``.

Every oracle compares two independent routes to the same quantity (a closed
form against the density matrix solver, an asymptotic expression against
quadrature, a post-condition against the solver output) and reports an
:class:`OracleResult`. The suite starts from a scenario configuration and
derives the regimes it needs from it, so a user supplied configuration is
verified in its own parameter neighbourhood.
"""

# Standard library modules.
import math

# External dependencies.
import numpy
from humanfriendly import Timer
from humanfriendly.tables import format_pretty_table
from humanfriendly.terminal import ansi_wrap
from humanfriendly.text import pluralize
from property_manager import PropertyManager, mutable_property, required_property
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import NumericalError, TriwaveError
from triwave.analytic import (
    HOLEBURNING_COEFFICIENTS,
    AnalyticContext,
    eq6_ensemble_field,
    eq6_ir_field,
    eq7_ir_field_homogeneous,
    eq10a_eq11_inhomogeneous,
    eta_parameter,
)
from triwave.cavity import coupling_g2, optical_photon_flux, self_consistent_ir
from triwave.ensemble import BroadeningSpec, holeburning_coefficients, quadrature_rule
from triwave.liouville import PacketParams, sigma32_perturbative
from triwave.scenario import scenario_from_config
from triwave.units import RelaxationSpec, energy_from_wavelength, wavelength_from_energy

# Public identifiers that require documentation.
__all__ = (
    'CONTEXT_FIELDS',
    'COEXISTENCE_SCENARIO',
    'INHOMOGENEOUS_RATIOS',
    'OracleResult',
    'REPORTED_ORACLES',
    'WEAK_DENSITY',
    'all_passed',
    'logger',
    'render_report',
    'run_oracles',
)

CONTEXT_FIELDS = (
    'omega', 'omega1', 'omega2', 'd', 'd1', 'd2', 'kappa', 'kappa1', 'kappa2',
    'G', 'G1', 'G2', 'gamma21', 'gamma31', 'gamma32', 'u21', 'u31', 'u32',
    'detunings', 'e1', 'e2',
)
"""The properties that define an :class:`~triwave.analytic.AnalyticContext` (a tuple of strings)."""

COEXISTENCE_SCENARIO = (
    ('relaxation.gamma21', 7.0), ('relaxation.gamma31', 7.0), ('relaxation.gamma32', 70.0),
    ('relaxation.r21', 7.0), ('relaxation.r31', 7.0), ('relaxation.r32', 10.0),
    ('relaxation.pump', 28.0), ('drives.mode', 'clamp'),
)
"""
The overrides of a scenario in which both optical modes lase together.

With the canonical rates only the second optical mode lases: it keeps the
first one below threshold. A slowly dephasing IR coherence (large γ32) and a
faster 3→2 relaxation let each mode grow in the presence of the other one.
"""

INHOMOGENEOUS_RATIOS = ((30, 0.20), (100, 0.10), (300, 0.05))
"""The width ratios u/γ and the tolerances of the inhomogeneous oracle."""

REPORTED_ORACLES = ('eq13-coefficients',)
"""The oracles that are reported without affecting the verdict (a tuple of strings)."""

WEAK_DENSITY = 1e14
"""The density of states (cm⁻³) at which the IR field hardly acts back on the medium."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class OracleResult(PropertyManager):

    """The outcome of one oracle."""

    @required_property
    def name(self):
        """A short identifier (a string)."""

    @required_property
    def measured(self):
        """What was measured (a human readable string)."""

    @required_property
    def criterion(self):
        """What was required (a human readable string)."""

    @required_property
    def passed(self):
        """:data:`True` when the criterion was met."""

    @mutable_property
    def required(self):
        """:data:`False` for oracles that are only reported (they don't affect :func:`all_passed()`)."""
        return True

    @property
    def status(self):
        """``pass``, ``FAIL`` or (for oracles that aren't required) ``deviates``."""
        if self.passed:
            return 'pass'
        return 'FAIL' if self.required else 'deviates'


def run_oracles(config, seed=0):
    """
    Run the oracle suite.

    :param config: The :class:`~triwave.config.ScenarioConfig` to start from.
    :param seed: The seed of the random parameter sets (an integer).
    :returns: A list of :class:`OracleResult` objects.

    An oracle whose computation raises a package exception fails with the
    message of that exception, the remaining oracles still run.
    """
    timer = Timer()
    rng = numpy.random.default_rng(seed)
    oracles = (
        ('eta-anchor', check_eta_anchor, ()),
        ('wavelength-anchors', check_wavelength_anchors, ()),
        ('eq6-vs-perturbative', check_eq6_perturbative, (config, rng)),
        ('eq6-vs-self-consistent', check_eq6_self_consistent, (config, rng)),
        ('eq7-vs-clamped-eq6', check_eq7_clamped, (config, rng)),
        ('eq7-vs-clamped-drives', check_eq7_clamped_drives, (config, rng)),
        ('eq10a-vs-quadrature', check_eq10a_quadrature, (config,)),
        ('eq13-coefficients', check_eq13_coefficients, (config,)),
        ('inversionless', check_inversionless, (config,)),
        ('manley-rowe-cap', check_manley_rowe, (config,)),
    )
    results = []
    for name, oracle, arguments in oracles:
        logger.verbose("Running oracle %s ..", name)
        try:
            result = oracle(*arguments)
        except TriwaveError as e:
            logger.warning("Oracle %s raised an exception: %s", name, e)
            result = OracleResult(name=name, measured="%s: %s" % (type(e).__name__, e),
                                  criterion="no exception", passed=False,
                                  required=name not in REPORTED_ORACLES)
        results.append(result)
    logger.info("Ran %s in %s (%i failed).", pluralize(len(results), "oracle"), timer,
                sum(1 for r in results if r.required and not r.passed))
    return results


def all_passed(results):
    """
    Check whether every required oracle passed.

    :param results: A list of :class:`OracleResult` objects.
    :returns: :data:`True` or :data:`False`.
    """
    return all(r.passed for r in results if r.required)


def render_report(results, colors=False):
    """
    Render the results of :func:`run_oracles()` as a table.

    :param results: A list of :class:`OracleResult` objects.
    :param colors: :data:`True` to highlight the status column with ANSI escape sequences.
    :returns: The table (a string).
    """
    rows = []
    for result in results:
        status = result.status
        if colors:
            status = ansi_wrap(status, color='green' if result.passed else ('red' if result.required else 'yellow'))
        rows.append([result.name, result.measured, result.criterion, status])
    return format_pretty_table(rows, ['Oracle', 'Measured', 'Criterion', 'Status'])


def check_eta_anchor():
    """Check that equal loss/confinement ratios give η = 1 exactly."""
    eta = eta_parameter('150 cm-1', 0.1, '150 cm-1', 0.1)
    return OracleResult(name='eta-anchor', measured="η = %r" % eta, criterion="η == 1.0", passed=eta == 1.0)


def check_wavelength_anchors():
    """Check the photon energy to wavelength conversions."""
    wavelength = wavelength_from_energy(98)
    energy = energy_from_wavelength(60)
    passed = abs(wavelength - 12.65) < 0.005 and abs(energy - 20.66) < 0.005
    return OracleResult(
        name='wavelength-anchors',
        measured="98 meV → %.4f µm, 60 µm → %.4f meV" % (wavelength, energy),
        criterion="12.65 µm and 20.66 meV (±0.005)",
        passed=passed,
    )


def check_eq6_perturbative(config, rng, count=50, tolerance=1e-6):
    """
    Compare the weak-field closed form with the linearized packet solver.

    Random homogeneous packets (rates, pump, detunings and complex drives)
    are solved at e = 0 and the closed form is evaluated with the resulting
    populations. Both must give the same IR amplitude.
    """
    base = scenario_from_config(_homogeneous(config)).context
    worst = 0.0
    for _ in range(count):
        rates = _random_relaxation(rng)
        delta21, delta32 = rng.uniform(-5, 5, size=2)
        detunings = (delta21, delta21 + delta32, delta32)
        e1, e2 = rng.uniform(0.1, 2, size=2) * numpy.exp(2j * math.pi * rng.uniform(size=2))
        response = sigma32_perturbative(PacketParams(detunings=detunings, relaxation=rates, e1=e1, e2=e2))
        ctx = _context(base, gamma21=rates.gamma21, gamma31=rates.gamma31, gamma32=rates.gamma32,
                       detunings=detunings, e1=e1, e2=e2)
        closed = eq6_ir_field(ctx, 1.0, response.state.n12, response.state.n13).value
        solver = 1j * response.source / ctx.kappa
        worst = max(worst, abs(closed - solver) / abs(solver))
    return OracleResult(
        name='eq6-vs-perturbative',
        measured="max rel. error %.2e over %i packets" % (worst, count),
        criterion="< %g" % tolerance,
        passed=worst < tolerance,
    )


def check_eq6_self_consistent(config, rng, count=50, tolerance=0.01):
    """
    Compare the weak-field closed form with the self-consistent solution in a weakly coupled medium.

    Each parameter set gets random rates, complex drives and (unless the IR
    mode frequency is configured explicitly) random optical detunings. The
    complex amplitudes are compared, so a wrong phase fails as well.
    """
    base = _homogeneous(_weak(config))
    omega21 = config['levels.e2'] - config['levels.e1']
    omega31 = config['levels.e3'] - config['levels.e1']
    worst = 0.0
    for _ in range(count):
        rates = _random_relaxation(rng)
        trial = base
        for name in ('gamma21', 'gamma31', 'gamma32', 'r21', 'r31', 'r32', 'pump'):
            trial = trial.replace('relaxation.%s' % name, getattr(rates, name))
        magnitudes, phases = rng.uniform(0.1, 2, size=2), rng.uniform(-math.pi, math.pi, size=2)
        for index in (1, 2):
            trial = trial.replace('drives.e%i' % index, magnitudes[index - 1])
            trial = trial.replace('drives.phase%i' % index, phases[index - 1])
        if config['ir.frequency'] is None:
            delta21, delta31 = rng.uniform(-5, 5, size=2)
            trial = trial.replace('optical1.frequency', omega21 - delta21)
            trial = trial.replace('optical2.frequency', omega31 - delta31)
        scenario = scenario_from_config(trial)
        solution = _solve(scenario, trial)
        response = sigma32_perturbative(scenario.packet)
        closed = eq6_ir_field(scenario.context, solution.g2, response.state.n12, response.state.n13).value
        worst = max(worst, abs(closed - solution.e) / abs(solution.e))
    return OracleResult(
        name='eq6-vs-self-consistent',
        measured="max rel. error %.2e over %i parameter sets" % (worst, count),
        criterion="< %g" % tolerance,
        passed=worst < tolerance,
    )


def check_eq7_clamped(config, rng, count=20, tolerance=0.05):
    """
    Compare the homogeneous closed form with the weak-field sum at gain clamped populations.

    The drives are kept well below the decay rates so that the dressing of
    the IR coherence stays small.
    """
    base = scenario_from_config(_homogeneous(config)).context
    worst = 0.0
    for _ in range(count):
        gammas = rng.uniform(5, 10, size=3)
        factors = rng.uniform(0.5, 2, size=6)
        e1, e2 = rng.uniform(0.01, 0.05, size=2) * gammas.min()
        ctx = _context(
            base, gamma21=gammas[0], gamma31=gammas[1], gamma32=gammas[2],
            e1=e1, e2=e2, detunings=(0.0, 0.0, 0.0),
            kappa=base.kappa * factors[0], kappa1=base.kappa1 * factors[1], kappa2=base.kappa2 * factors[2],
            G=min(1.0, base.G * factors[3]), G1=min(1.0, base.G1 * factors[4]), G2=min(1.0, base.G2 * factors[5]),
        )
        closed = eq7_ir_field_homogeneous(ctx)
        clamped = abs(eq6_ensemble_field(ctx).value)
        worst = max(worst, abs(closed - clamped) / clamped)
    return OracleResult(
        name='eq7-vs-clamped-eq6',
        measured="max rel. error %.2e over %i contexts" % (worst, count),
        criterion="< %g" % tolerance,
        passed=worst < tolerance,
    )


def check_eq7_clamped_drives(config, rng, count=20, tolerance=1e-3):
    """
    Compare the homogeneous closed form with the weak-field sum at gain clamped drives.

    The optical amplitudes come from :func:`~triwave.cavity.clamp_drives()`
    in the scenarios around :data:`COEXISTENCE_SCENARIO` (γ32 and r32 are
    randomized), the populations from the linearized packet solver at those
    amplitudes. On resonance the closed form holds at any drive strength
    once both gains equal their losses, so the tolerance only covers the
    accuracy of the root finder.
    """
    base = _homogeneous(config)
    for key, value in COEXISTENCE_SCENARIO:
        base = base.replace(key, value)
    worst = 0.0
    for _ in range(count):
        scenario = scenario_from_config(base.replace(
            'relaxation.gamma32', rng.uniform(55, 85),
        ).replace(
            'relaxation.r32', rng.uniform(9, 10.5),
        ))
        mode = scenario.ir_mode
        g2 = coupling_g2(scenario.medium.density, scenario.medium.dipoles.d32,
                         scenario.drives.ir_frequency, mode.index, mode.confinement).g2
        response = sigma32_perturbative(scenario.packet)
        summed = abs(eq6_ir_field(scenario.context, g2, response.state.n12, response.state.n13).value)
        closed = eq7_ir_field_homogeneous(scenario.context)
        worst = max(worst, abs(closed - summed) / summed)
    return OracleResult(
        name='eq7-vs-clamped-drives',
        measured="max rel. error %.2e over %i clamped scenarios" % (worst, count),
        criterion="< %g" % tolerance,
        passed=worst < tolerance,
    )


def check_eq10a_quadrature(config):
    """
    Compare the unsaturated inhomogeneous closed form with quadrature.

    Uses a Gaussian line with u21 = u32 (the width ratio the closed form
    reduces to) at the ratios in :data:`INHOMOGENEOUS_RATIOS`. The error
    must stay within each tolerance and shrink as the lines get wider.
    """
    base = scenario_from_config(_homogeneous(config)).context
    gamma = max(base.gamma21, base.gamma31, base.gamma32)
    errors = []
    passed = True
    for ratio, tolerance in INHOMOGENEOUS_RATIOS:
        width = ratio * gamma
        ctx = _context(base, u21=width, u32=width, u31=2 * width, detunings=(0.0, 0.0, 0.0),
                       e1=0.01 * gamma, e2=0.01 * gamma)
        broadening = BroadeningSpec(kind='gaussian', u21=width, u32=width, nodes=config['broadening.nodes'],
                                    cutoff=config['broadening.cutoff'], refine=False)
        rates = RelaxationSpec(gamma21=ctx.gamma21, gamma31=ctx.gamma31, gamma32=ctx.gamma32)
        rule = quadrature_rule(broadening, PacketParams(relaxation=rates, e1=ctx.e1, e2=ctx.e2))
        closed = eq10a_eq11_inhomogeneous(ctx).value
        numeric = abs(eq6_ensemble_field(ctx, rule).value)
        error = abs(closed - numeric) / numeric
        errors.append(error)
        passed = passed and error < tolerance
    monotone = all(a > b for a, b in zip(errors, errors[1:]))
    return OracleResult(
        name='eq10a-vs-quadrature',
        measured="rel. errors %s at u/γ = %s" % (
            ", ".join("%.3f" % e for e in errors),
            ", ".join(str(r) for r, _ in INHOMOGENEOUS_RATIOS),
        ),
        criterion="< %s, decreasing" % ", ".join(str(t) for _, t in INHOMOGENEOUS_RATIOS),
        passed=passed and monotone,
    )


def check_eq13_coefficients(config, tolerance=0.15):
    """
    Extract the hole burning coefficients from quadrature.

    All rates are set to the configured γ21, the drives to 10γ and the widths
    to u21 = 10|e1| with u32 = u21/10. With a single shift variable the upper
    levels are nearly degenerate at every packet, so the equal drives trap
    population in their dark superposition and the gain of the first field
    nearly vanishes. The extracted coefficients (about 6.2 and 0.27 for the
    defaults) keep growing with |e1|/γ instead of settling, which is why this
    oracle is reported without affecting the overall verdict.
    """
    gamma = config['relaxation.gamma21']
    drive = 10 * gamma
    width = 10 * drive
    rates = RelaxationSpec(gamma21=gamma, gamma31=gamma, gamma32=gamma, r21=gamma, r31=gamma, r32=gamma,
                           pump=config['relaxation.pump'])
    kind = config['broadening.kind']
    broadening = BroadeningSpec(kind='lorentzian' if kind == 'homogeneous' else kind, u21=width, u32=0.1 * width,
                                nodes=config['broadening.nodes'], cutoff=config['broadening.cutoff'], refine=True)
    c1, c2 = holeburning_coefficients(PacketParams(relaxation=rates, e1=drive, e2=drive), broadening)
    expected1, expected2 = HOLEBURNING_COEFFICIENTS
    passed = abs(c1 - expected1) <= tolerance * expected1 and abs(c2 - expected2) <= tolerance * expected2
    return OracleResult(
        name='eq13-coefficients',
        measured="c1 = %.3f, c2 = %.3f (%s line)" % (c1, c2, broadening.kind),
        criterion="%s ± %i%%" % (", ".join(str(c) for c in HOLEBURNING_COEFFICIENTS), tolerance * 100),
        passed=passed,
        required='eq13-coefficients' not in REPORTED_ORACLES,
    )


def check_inversionless(config):
    """
    Check that an IR field is generated without population inversion on 3↔2.

    The 3→2 relaxation is made three times faster than 2→1 so that level 2
    stays more populated than level 3 at every packet, even with the drives on.
    """
    weak = _weak(config).replace('relaxation.r32', 3 * config['relaxation.r21'])
    scenario = scenario_from_config(weak)
    solution = _solve(scenario, config)
    return OracleResult(
        name='inversionless',
        measured="min n23 = %.4g, |e| = %.4g meV" % (solution.n23_min, abs(solution.e)),
        criterion="n23 >= 0 everywhere and |e| > 0",
        passed=solution.n23_min >= 0 and abs(solution.e) > 0,
    )


def check_manley_rowe(config):
    """Check that the reported IR photon flux never exceeds either optical photon flux."""
    scenario = scenario_from_config(_weak(config))
    solution = _solve(scenario, config)
    dipoles = scenario.medium.dipoles
    drives = scenario.drives
    bound = min(
        optical_photon_flux(drives.optical1, dipoles.d21, drives.mode1.index),
        optical_photon_flux(drives.optical2, dipoles.d31, drives.mode2.index),
    )
    return OracleResult(
        name='manley-rowe-cap',
        measured="IR flux %.4g vs. optical %.4g s⁻¹cm⁻²" % (solution.photon_flux, bound),
        criterion="IR flux <= min(optical flux)",
        passed=solution.photon_flux <= bound,
    )


def _context(base, **changes):
    values = dict((name, getattr(base, name)) for name in CONTEXT_FIELDS)
    values.update(changes)
    return AnalyticContext(**values)


def _random_relaxation(rng):
    gammas = rng.uniform(5, 10, size=3)
    populations = rng.uniform(1, 10, size=3)
    return RelaxationSpec(
        gamma21=gammas[0], gamma31=gammas[1], gamma32=gammas[2],
        r21=populations[0], r31=populations[1], r32=populations[2],
        pump=rng.uniform(5, 40),
    )


def _weak(config):
    return config.replace('medium.density', min(config['medium.density'], WEAK_DENSITY))


def _solve(scenario, config):
    try:
        return self_consistent_ir(
            medium=scenario.medium,
            drives=scenario.drives,
            mode=scenario.ir_mode,
            broadening=scenario.broadening,
            damping=config['solver.damping'],
            max_iterations=config['solver.max_iterations'],
            tolerance=config['solver.tolerance'],
            floor=config['solver.absolute_floor'],
        )
    except NumericalError as e:
        logger.warning("Self-consistent solve failed: %s", e)
        raise


def _homogeneous(config):
    for key in ('broadening.u21', 'broadening.u32', 'broadening.u31'):
        config = config.replace(key, 0.0)
    return config.replace('broadening.kind', 'homogeneous')
