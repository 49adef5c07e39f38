#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import collections
import copy
import logging

from ..exceptions import ConfigError, MeshError, SolverException
from ..schemes.config import Formulation
from ..schemes.discretization import Discretization
from ..schemes.stepper import Stepper
from ..util import Util
from .certificate import check_dissipation, dissipation_tolerance
from .decay import estimate_decay_rate, estimate_poincare_constant, theoretical_decay_rate
from .energy import EnergyEvaluator
from .initial_conditions import InitialKind, initial_state
from .output import EnergyTraceWriter, certificate_summary, snapshot_path, write_certificate_summary, write_vtk
from .run_config import load_run_config

__all__ = ['Runner', 'RunResult', 'SweepOutcome', 'run_simulation', 'dt_sweep', 'log_separation', 'exit_status',
           'EXIT_PASS', 'EXIT_CERTIFICATE', 'EXIT_SOLVER', 'EXIT_CONFIG']

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_CERTIFICATE = 2
EXIT_SOLVER = 3
EXIT_CONFIG = 4

RunResult = collections.namedtuple('RunResult', ['status', 'records', 'certificates', 'summary', 'error', 'state'])
RunResult.__doc__ = """status: 'passed', 'failed' (certificate) or 'error' (solver); state: last accepted State"""

SweepOutcome = collections.namedtuple('SweepOutcome', ['dt', 'formulation', 'status', 'steps', 'worst_slack',
                                                       'error_code'])


def exit_status(result):
    return {'passed': EXIT_PASS, 'failed': EXIT_CERTIFICATE}.get(result.status, EXIT_SOLVER)


class Runner(object):
    """ sequential time loop of one RunConfig

    Builds mesh, spaces and the initial state, advances ``run.steps`` steps,
    certifies every step and writes the CSV trace, the optional VTK snapshots
    and the certificate summary into ``run.output_dir``.

    :type cfg: RunConfig
    :param cfg: validated run configuration
    """

    def __init__(self, cfg):
        self.cfg = cfg.validate()
        self.logger = Util.get_run_logger(cfg.scheme, __name__)
        self.mesh = cfg.build_mesh()
        self.disc = Discretization(self.mesh, cfg.scheme)
        self.stepper = Stepper(self.mesh, cfg.scheme, self.disc)
        self.energy = EnergyEvaluator(self.disc)
        self.logger.info(u"runner: {0} triangles, {1} unknowns, {2} steps of dt={3}".format(
            self.mesh.n_triangles, self.disc.size, cfg.run.steps, cfg.scheme.dt))

    def _snapshot(self, state):
        run = self.cfg.run
        if run.output_dir is None or run.vtk_every <= 0 or state.n % run.vtk_every != 0:
            return
        write_vtk(snapshot_path(run.output_dir, state.n), state)

    def _theoretical_rate(self):
        if self.cfg.initial.kind != InitialKind.VORTEX:
            return None
        try:
            poincare = estimate_poincare_constant(self.mesh)
        except ValueError:
            return None
        return theoretical_decay_rate(self.cfg.scheme.params, poincare)

    def run(self):
        """ :return: RunResult; solver errors end the run with status 'error' """
        cfg = self.cfg
        run = cfg.run
        state = initial_state(self.disc, cfg.initial)
        record = self.energy.record(state)
        records = [record]
        certificates = []
        tol = dissipation_tolerance(cfg.scheme, record.F)
        error = None
        worst_remap = 0.0
        self.logger.info(u"step 0: F={0:.6e}, certificate tol={1:.3e}".format(record.F, tol))

        writer = EnergyTraceWriter(run.path(run.csv)) if run.path(run.csv) else None
        try:
            if writer is not None:
                writer.write(record)
            self._snapshot(state)
            for _ in range(run.steps):
                try:
                    new, report = self.stepper.step(state)
                    new_record = self.energy.record(new, previous=state, fp_iters=report.fp_iters)
                except (ConfigError, MeshError):
                    raise
                except SolverException as ex:
                    self.logger.error(u"step {0} failed: {1}".format(state.n + 1, ex))
                    error = ex
                    break
                worst_remap = max(worst_remap, report.remap_residual)
                certificate = check_dissipation(record, new_record, tol)
                certificates.append(certificate)
                if writer is not None:
                    writer.write(new_record, certificate.slack)
                if certificate.passed:
                    self.logger.info(u"step {0}: F={1:.6e}, slack={2:.3e}, passes={3}".format(
                        new.n, new_record.F, certificate.slack, report.fp_iters))
                else:
                    self.logger.error(u"step {0}: free energy inequality violated, slack {1:.3e} > tol {2:.3e}".format(
                        new.n, certificate.slack, tol))
                state, record = new, new_record
                records.append(record)
                self._snapshot(state)
                if not certificate.passed and run.stop_on_failure:
                    break
        finally:
            if writer is not None:
                writer.close()

        decay = estimate_decay_rate(records) if len(records) >= 2 else None
        summary = certificate_summary(certificates, tol, min(r.min_eig for r in records), cfg.scheme.experimental,
                                      decay, error)
        summary['theoretical_decay_rate'] = self._theoretical_rate()
        summary['remap_residual'] = worst_remap
        summary['config'] = cfg.source
        summary['scheme'] = cfg.scheme.tag()
        if run.path(run.summary):
            write_certificate_summary(run.path(run.summary), summary)
        self.logger.info(u"run finished: status={0}, steps={1}, worst slack={2}".format(
            summary['status'], summary['steps'], summary['worst_slack']))
        return RunResult(status=summary['status'], records=records, certificates=certificates, summary=summary,
                         error=error, state=state)


def run_simulation(config_path, stop_on_failure=None):
    """ load, run and certify one configuration file

    :return: exit status: 0 passed, 2 certificate failure, 3 solver error, 4 invalid configuration or mesh
    """
    try:
        cfg = load_run_config(config_path)
        if stop_on_failure is not None:
            cfg.run.stop_on_failure = stop_on_failure
        result = Runner(cfg).run()
    except (ConfigError, MeshError) as ex:
        logger.error(u"cannot run {0}: {1}".format(config_path, ex))
        return EXIT_CONFIG
    return exit_status(result)


def dt_sweep(cfg, dts, formulations=(Formulation.CONFORMATION, Formulation.LOG)):
    """ run the same scenario for every (formulation, dt) pair without writing output

    :type cfg: RunConfig
    :param cfg: base configuration; copied, never modified

    :type dts: list of float
    :param dts: time steps to try

    :return: list of SweepOutcome
    """
    outcomes = []
    for formulation in formulations:
        for dt in dts:
            trial = copy.deepcopy(cfg)
            trial.scheme.formulation = Formulation(getattr(formulation, 'value', formulation))
            trial.scheme.dt = float(dt)
            trial.run.output_dir = None
            result = Runner(trial).run()
            worst = result.summary['worst_slack']
            code = result.error.get_error_code() if result.error is not None else None
            outcomes.append(SweepOutcome(dt=float(dt), formulation=trial.scheme.formulation.value,
                                         status=result.status, steps=len(result.certificates), worst_slack=worst,
                                         error_code=code))
            logger.info(u"sweep {0} dt={1}: {2} after {3} steps".format(
                trial.scheme.formulation.value, dt, result.status, len(result.certificates)))
    return outcomes


def log_separation(outcomes):
    """time steps where the conformation run broke down while the log run passed every certificate"""
    by_key = dict(((o.formulation, o.dt), o) for o in outcomes)
    separated = []
    for (formulation, dt), outcome in sorted(by_key.items(), key=lambda item: item[0][1]):
        if formulation != Formulation.CONFORMATION.value or outcome.status != 'error':
            continue
        log = by_key.get((Formulation.LOG.value, dt))
        if log is not None and log.status == 'passed':
            separated.append(dt)
    return separated
