# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Execution of scenarios and parameter sweeps.

:func:`run_scenario()` turns a :class:`~triwave.config.ScenarioConfig` into
one flat result record: the self-consistent IR field, every closed form whose
preconditions are met (with explicit validity columns), the efficiency
parameter, the phase mismatch and the output power. :func:`run_sweep()`
repeats that for every value of a :class:`~triwave.config.SweepSpec`.
"""

# Standard library modules.
import contextlib
import math

# External dependencies.
import numpy
from humanfriendly import Timer
from humanfriendly.text import pluralize
from property_manager import PropertyManager, required_property
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import TriwaveError, ValidationError
from triwave.analytic import (
    AnalyticContext,
    eq6_ir_field,
    eq7_ir_field_homogeneous,
    eq10a_eq11_inhomogeneous,
    eq13_ir_field_holeburning,
)
from triwave.cavity import (
    CavityModeSpec,
    DriveSet,
    Medium,
    clamp_drives,
    mode_steady_field,
    output_power,
    phase_mismatch,
    self_consistent_ir,
)
from triwave.ensemble import REGIME_RATIO, BroadeningSpec, ensemble_average
from triwave.liouville import PacketParams
from triwave.units import DipoleSet, DriveField, LevelScheme, RelaxationSpec, closed_loop_detunings

# Public identifiers that require documentation.
__all__ = (
    'COLUMNS',
    'Scenario',
    'logger',
    'run_scenario',
    'run_sweep',
    'scenario_from_config',
)

COLUMNS = (
    'e_abs', 'e_phase', 'intensity', 'photon_flux', 'raw_photon_flux', 'cap_applied',
    'iterations', 'residual', 'n23_min', 'ir_inverted', 'e1_abs', 'e2_abs', 'g2',
    'eta', 'eta2', 'delta_k', 'phase_matched', 'power_mw',
    'eq6_abs', 'eq6_valid', 'eq7_abs', 'eq10a_abs', 'eq10a_valid', 'eq11_ratio',
    'eq13_abs', 'eq13_valid',
)
"""The columns of a scenario record, in output order (a tuple of strings)."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


class Scenario(PropertyManager):

    """The domain objects that a :class:`~triwave.config.ScenarioConfig` describes."""

    @required_property
    def config(self):
        """The :class:`~triwave.config.ScenarioConfig` the scenario was built from."""

    @required_property
    def medium(self):
        """The :class:`~triwave.cavity.Medium`."""

    @required_property
    def drives(self):
        """The :class:`~triwave.cavity.DriveSet` (after gain clamping when requested)."""

    @required_property
    def ir_mode(self):
        """The :class:`~triwave.cavity.CavityModeSpec` of the IR mode."""

    @required_property
    def broadening(self):
        """The :class:`~triwave.ensemble.BroadeningSpec`."""

    @property
    def detunings(self):
        """The rotating frame detunings ``(Δ21, Δ31, Δ32)`` at line center."""
        return closed_loop_detunings(
            self.medium.levels,
            self.drives.optical1.frequency,
            self.drives.optical2.frequency,
            self.drives.ir_frequency,
        )

    @property
    def packet(self):
        """The :class:`~triwave.liouville.PacketParams` at ξ = 0 without IR field."""
        return PacketParams(
            detunings=self.detunings,
            relaxation=self.medium.relaxation,
            e1=self.drives.optical1.rabi,
            e2=self.drives.optical2.rabi,
        )

    @property
    def context(self):
        """The :class:`~triwave.analytic.AnalyticContext` of the scenario."""
        rates = self.medium.relaxation
        dipoles = self.medium.dipoles
        return AnalyticContext(
            omega=self.drives.ir_frequency,
            omega1=self.drives.optical1.frequency,
            omega2=self.drives.optical2.frequency,
            d=dipoles.d32, d1=dipoles.d21, d2=dipoles.d31,
            kappa=self.ir_mode.kappa, kappa1=self.drives.mode1.kappa, kappa2=self.drives.mode2.kappa,
            G=self.ir_mode.confinement, G1=self.drives.mode1.confinement, G2=self.drives.mode2.confinement,
            gamma21=rates.gamma21, gamma31=rates.gamma31, gamma32=rates.gamma32,
            u21=self.broadening.u21, u31=self.broadening.u31, u32=self.broadening.u32,
            detunings=self.detunings,
            e1=self.drives.optical1.rabi,
            e2=self.drives.optical2.rabi,
        )


def scenario_from_config(config):
    """
    Build the domain objects of a scenario.

    :param config: A :class:`~triwave.config.ScenarioConfig` object.
    :returns: A :class:`Scenario` object.
    :raises: :exc:`.ValidationError` when the values are individually valid
             but physically inconsistent.
    """
    levels = LevelScheme(e1=config['levels.e1'], e2=config['levels.e2'], e3=config['levels.e3'])
    medium = Medium(
        levels=levels,
        dipoles=DipoleSet(d21=config['dipoles.d21'], d31=config['dipoles.d31'], d32=config['dipoles.d32']),
        relaxation=RelaxationSpec(**dict(
            (name, config['relaxation.%s' % name])
            for name in ('gamma21', 'gamma31', 'gamma32', 'r21', 'r31', 'r32', 'pump')
        )),
        density=config['medium.density'],
    )
    broadening = BroadeningSpec(
        kind=config['broadening.kind'],
        u21=config['broadening.u21'],
        u31=config['broadening.u31'],
        u32=config['broadening.u32'],
        nodes=config['broadening.nodes'],
        cutoff=config['broadening.cutoff'],
        refine=config['broadening.refine'],
    )
    omega1 = config['optical1.frequency'] or levels.omega21
    omega2 = config['optical2.frequency'] or levels.omega31
    mode1 = _mode(config, 'optical1', omega1)
    mode2 = _mode(config, 'optical2', omega2)
    ir_mode = _mode(config, 'ir', config['ir.frequency'] or omega2 - omega1)
    drives = DriveSet(
        optical1=DriveField(role='optical-1', frequency=omega1, wavenumber=mode1.wavenumber,
                            rabi=config['drives.e1'] * numpy.exp(1j * config['drives.phase1'])),
        optical2=DriveField(role='optical-2', frequency=omega2, wavenumber=mode2.wavenumber,
                            rabi=config['drives.e2'] * numpy.exp(1j * config['drives.phase2'])),
        mode1=mode1,
        mode2=mode2,
    )
    if config['drives.mode'] == 'clamp':
        drives = clamp_drives(medium, drives, broadening)
    return Scenario(config=config, medium=medium, drives=drives, ir_mode=ir_mode, broadening=broadening)


def run_scenario(config):
    """
    Run a single scenario.

    :param config: A :class:`~triwave.config.ScenarioConfig` object.
    :returns: A dictionary with the keys in :data:`COLUMNS`. Closed forms
              whose preconditions don't hold are :data:`None`.
    :raises: Any :exc:`.TriwaveError`, with the scenario named in the message.
    """
    timer = Timer()
    label = config.filename or "scenario"
    with scenario_context(label):
        scenario = scenario_from_config(config)
        solution = self_consistent_ir(
            medium=scenario.medium,
            drives=scenario.drives,
            mode=scenario.ir_mode,
            broadening=scenario.broadening,
            damping=config['solver.damping'],
            max_iterations=config['solver.max_iterations'],
            tolerance=config['solver.tolerance'],
            floor=config['solver.absolute_floor'],
        )
        ctx = scenario.context
        drives = scenario.drives
        mismatch, matched = phase_mismatch(
            drives.optical1.wavenumber,
            drives.optical2.wavenumber,
            scenario.ir_mode.wavenumber,
            config['device.length'],
        )
        record = dict(
            e_abs=abs(solution.e),
            e_phase=math.atan2(solution.e.imag, solution.e.real),
            intensity=solution.intensity,
            photon_flux=solution.photon_flux,
            raw_photon_flux=solution.raw_photon_flux,
            cap_applied=solution.cap_applied,
            iterations=solution.iterations,
            residual=solution.residual,
            n23_min=solution.n23_min,
            ir_inverted=solution.n23_min < 0,
            e1_abs=abs(drives.optical1.rabi),
            e2_abs=abs(drives.optical2.rabi),
            g2=solution.g2,
            eta=ctx.eta,
            eta2=ctx.eta2,
            delta_k=mismatch,
            phase_matched=matched,
            power_mw=output_power(solution, scenario.ir_mode, config['device.facet_area'],
                                  config['device.outcoupling']),
        )
        record.update(_closed_forms(scenario, ctx, solution.g2))
    logger.info("Finished %s in %s (|e| = %.6g meV).", label, timer, record['e_abs'])
    return dict((name, record[name]) for name in COLUMNS)


def run_sweep(config, sweep):
    """
    Run a scenario for every value of a sweep.

    :param config: A :class:`~triwave.config.ScenarioConfig` object.
    :param sweep: A :class:`~triwave.config.SweepSpec` object.
    :returns: A list of dictionaries (one per step, in sweep order) whose
              first key is the swept key.
    """
    timer = Timer()
    rows = []
    for number, value in enumerate(sweep.values(), start=1):
        logger.verbose("Sweep step %i/%i: %s = %r", number, sweep.steps, sweep.key, value)
        with scenario_context("sweep step %i (%s = %r)" % (number, sweep.key, value)):
            record = run_scenario(config.replace(sweep.key, value))
        row = {sweep.key: value}
        row.update(record)
        rows.append(row)
    logger.info("Finished sweep of %s in %s.", pluralize(len(rows), "step"), timer)
    return rows


@contextlib.contextmanager
def scenario_context(label):
    """
    Prefix the message of package exceptions with a scenario label.

    :param label: The label to add (a string).
    """
    try:
        yield
    except TriwaveError as e:
        if e.args and isinstance(e.args[0], str) and not e.args[0].startswith(label):
            e.args = ("%s: %s" % (label, e.args[0]),) + e.args[1:]
        raise


def _mode(config, section, frequency):
    value, unit = config['%s.loss' % section]
    index = config['%s.index' % section]
    confinement = config['%s.confinement' % section]
    if unit == 'meV':
        return CavityModeSpec(frequency=frequency, kappa=value, index=index, confinement=confinement)
    return CavityModeSpec.from_loss(frequency, value, index, confinement)


def _closed_forms(scenario, ctx, g2):
    rates = scenario.medium.relaxation
    broadening = scenario.broadening
    homogeneous = broadening.kind == 'homogeneous'
    linear = ensemble_average(scenario.packet, broadening, linearize=True)
    shifts = broadening.shifts(linear.nodes)
    eq6 = eq6_ir_field(ctx, g2, linear.states.n12, linear.states.n13, shifts=shifts, weights=linear.weights)
    # The sum assumes an IR mode at ω2 − ω1, the cavity response adds its detuning.
    detuned = mode_steady_field(eq6.value * ctx.kappa, scenario.ir_mode, scenario.drives.ir_frequency)
    columns = dict(
        eq6_abs=abs(detuned),
        eq6_valid=eq6.valid,
        eq7_abs=eq7_ir_field_homogeneous(ctx) if homogeneous else None,
        eq10a_abs=None,
        eq10a_valid=False,
        eq11_ratio=None,
        eq13_abs=None,
        eq13_valid=False,
    )
    if not homogeneous and broadening.u32 > 0:
        eq10a = eq10a_eq11_inhomogeneous(ctx)
        columns.update(eq10a_abs=eq10a.value, eq10a_valid=eq10a.valid, eq11_ratio=eq10a.intensity_ratio)
    if not homogeneous:
        try:
            columns['eq13_abs'] = eq13_ir_field_holeburning(ctx, rates)
        except ValidationError as e:
            logger.verbose("Skipping hole burning closed form: %s", e)
        else:
            drive = max(abs(ctx.e1), abs(ctx.e2))
            gamma = max(rates.gamma21, rates.gamma31, rates.gamma32)
            columns['eq13_valid'] = bool(
                min(abs(ctx.e1), abs(ctx.e2)) >= REGIME_RATIO * gamma
                and min(broadening.u21, broadening.u31) >= REGIME_RATIO * drive
            )
    return columns
