#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Free energy of a discrete state and the dissipation of the step that produced it.

    F = (Re/2) int |u|^2 + (eps/2Wi) int tr(sigma - ln sigma - I)

with sigma replaced by pi_h sigma for P1disc stress and by e^{pi_h psi} for
the log formulation. The stress dissipation is the relaxation term tested
with the entropy variation:

    dt (eps/2Wi^2) int tr(sigma + sigma^-1 - 2I)          conformation, lie
    dt (eps/2Wi^2) int tr(e^psi + e^-psi - 2I)            log
"""

import collections

import numpy as np

from ..exceptions import DomainError, PositivityError
from ..schemes.discretization import Discretization
from ..tensor_algebra import check_spd, entropy_terms, sym_eig

__all__ = ['EnergyRecord', 'EnergyEvaluator', 'compute_free_energy']

EnergyRecord = collections.namedtuple('EnergyRecord', ['n', 'time', 'F', 'kinetic', 'entropic', 'diss_kinetic',
                                                       'diss_viscous', 'diss_stress', 'min_eig', 'fp_iters'])
EnergyRecord.__doc__ = """Free energy and dissipation of one step; F = kinetic + entropic."""


class EnergyEvaluator(object):
    """ evaluates EnergyRecords on a fixed Discretization

    :type disc: Discretization
    :param disc: spaces of the run
    """

    def __init__(self, disc):
        self.disc = disc
        self.cfg = disc.cfg

    def _velocity_vector(self, state):
        c = state.velocity.coefficients
        return np.concatenate([c[:, 0], c[:, 1]])

    def _quadratic(self, matrix, vector):
        return float(vector @ (matrix @ vector))

    def _stress_terms(self, stress):
        """(entropic integral, dissipation integral, min eigenvalue of pi_h sigma), before the eps/Wi factors"""
        disc = self.disc
        areas = disc.mesh.areas
        coefficients = stress.coefficients
        pi = disc.barycenter_stress(coefficients)
        if self.cfg.is_log:
            values, _ = sym_eig(pi)
            entropic = np.sum(np.exp(values) - values - 1.0, axis=-1)
            dissipation = np.sum(np.exp(values) + np.exp(-values) - 2.0, axis=-1)
            min_eig = float(np.exp(values[:, 1].min()))
        else:
            try:
                min_eig = float(np.min(check_spd(pi)))
            except DomainError as ex:
                raise PositivityError(int(ex.index), ex.eigenvalue)
            entropic, dissipation = entropy_terms(pi)
        return float(areas @ entropic), float(areas @ dissipation), min_eig

    def record(self, state, previous=None, fp_iters=0):
        """ EnergyRecord of ``state``; the dissipation fields need the state of the previous step

        :raise PositivityError: pi_h sigma not SPD (conformation and lie formulations)
        """
        cfg = self.cfg
        p = cfg.params
        disc = self.disc
        u = self._velocity_vector(state)
        kinetic = 0.5 * p.re * self._quadratic(disc.global_velocity_mass, u)
        entropic_integral, dissipation_integral, min_eig = self._stress_terms(state.stress)
        entropic = p.eps / (2.0 * p.wi) * entropic_integral

        diss_kinetic = diss_viscous = diss_stress = 0.0
        if previous is not None:
            du = u - self._velocity_vector(previous)
            diss_kinetic = 0.5 * p.re * self._quadratic(disc.global_velocity_mass, du)
            diss_viscous = cfg.dt * (1.0 - p.eps) * self._quadratic(disc.global_velocity_stiffness, u)
            diss_stress = cfg.dt * p.eps / (2.0 * p.wi ** 2) * dissipation_integral

        return EnergyRecord(n=state.n, time=state.n * cfg.dt, F=kinetic + entropic, kinetic=kinetic,
                            entropic=entropic, diss_kinetic=diss_kinetic, diss_viscous=diss_viscous,
                            diss_stress=diss_stress, min_eig=min_eig, fp_iters=int(fp_iters))


def compute_free_energy(state, cfg, m, previous=None, fp_iters=0):
    """ EnergyRecord of a state

    :type previous: State
    :param previous: state of the previous step, for the dissipation fields (zero when omitted)
    """
    return EnergyEvaluator(Discretization(m, cfg)).record(state, previous, fp_iters)
