#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Initial states of the three run scenarios.

equilibrium  u = 0, p = 0, sigma = I
relaxation   u = 0, p = 0, sigma = constant SPD sigma0
vortex       u = discrete Leray projection of curl(sin^2(pi x) sin^2(pi y)),
             sigma = I + c a a^T with a = (sin(pi x), sin(pi y))

Coordinates are mapped to the unit square through the bounding box of the
mesh. The log formulation starts from psi = ln sigma.
"""

import logging
from enum import Enum

import numpy as np

from ..exceptions import ConfigError, DomainError
from ..schemes.discretization import Triplets
from ..schemes.linear_solver import solve_linear
from ..schemes.state import State, VelocityPressureState
from ..tensor_algebra import IDENTITY, check_spd, spd_log

__all__ = ['InitialKind', 'InitialCondition', 'initial_state', 'leray_projection', 'vortex_velocity',
           'vortex_stress']

logger = logging.getLogger(__name__)


class InitialKind(Enum):
    EQUILIBRIUM = 'equilibrium'
    RELAXATION = 'relaxation'
    VORTEX = 'vortex'


class InitialCondition(object):
    """
    :type kind: InitialKind
    :param kind: equilibrium, relaxation or vortex

    :type sigma0: tuple
    :param sigma0: packed (s11, s12, s22) of the relaxation scenario

    :type amplitude: float
    :param amplitude: scale of the vortex stream function

    :type perturbation: float
    :param perturbation: weight c of the rank one stress perturbation of the vortex
    """

    def __init__(self, kind=InitialKind.EQUILIBRIUM, sigma0=(2.0, 0.0, 0.5), amplitude=1.0, perturbation=0.5):
        try:
            self.kind = InitialKind(kind.value if isinstance(kind, InitialKind) else kind)
        except ValueError as ex:
            raise ConfigError(ex, settings='initial.kind',
                              msg=u'expected one of {0}'.format([k.value for k in InitialKind]))
        self.sigma0 = np.asarray(sigma0, dtype=float)
        self.amplitude = float(amplitude)
        self.perturbation = float(perturbation)

    def validate(self):
        if self.sigma0.shape != (3,):
            raise ConfigError(settings='initial.sigma0', msg=u'sigma0 takes three packed entries s11, s12, s22')
        try:
            check_spd(self.sigma0)
        except DomainError as ex:
            raise ConfigError(ex, settings='initial.sigma0', msg=u'sigma0 must be symmetric positive definite')
        if not self.perturbation >= 0.0:
            raise ConfigError(settings='initial.perturbation', msg=u'perturbation must be >= 0')
        return self

    def __repr__(self):
        return 'InitialCondition({0}, sigma0={1}, amplitude={2!r}, perturbation={3!r})'.format(
            self.kind.value, self.sigma0.tolist(), self.amplitude, self.perturbation)


def _unit_coordinates(m, x):
    lower = m.vertices.min(axis=0)
    extent = m.vertices.max(axis=0) - lower
    return (np.asarray(x) - lower) / extent, extent


def vortex_velocity(m, amplitude=1.0):
    """ curl of amplitude * sin^2(pi x) sin^2(pi y), in the coordinates of the mesh bounding box

    :return: callable (n, 2) -> (n, 2)
    """
    def fn(x):
        xi, extent = _unit_coordinates(m, x)
        sx, sy = np.sin(np.pi * xi[:, 0]), np.sin(np.pi * xi[:, 1])
        ux = amplitude * np.pi * sx ** 2 * np.sin(2.0 * np.pi * xi[:, 1]) / extent[1]
        uy = -amplitude * np.pi * sy ** 2 * np.sin(2.0 * np.pi * xi[:, 0]) / extent[0]
        return np.stack([ux, uy], axis=-1)
    return fn


def vortex_stress(m, perturbation=0.5):
    """packed I + c a a^T with a = (sin(pi x), sin(pi y))"""
    def fn(x):
        xi, _ = _unit_coordinates(m, x)
        a = np.sin(np.pi * xi)
        return IDENTITY + perturbation * np.stack([a[:, 0] ** 2, a[:, 0] * a[:, 1], a[:, 1] ** 2], axis=-1)
    return fn


def leray_projection(disc, fn, solver_options=None):
    """ discrete Leray projection of a velocity field onto the discretely divergence free subspace

    Solves the mass-weighted Stokes problem of the velocity/pressure pair

        (u, v) - (p, div v) = (f, v),   (q, div u) + stabilization = 0

    with u = 0 on the boundary, so that u satisfies the same continuity
    equations as the iterates of the scheme.

    :type disc: Discretization
    :param disc: spaces of the run

    :type fn: callable
    :param fn: (n, 2) points -> (n, 2) velocity

    :return: (nu, 2) velocity coefficients
    """
    size = disc.s_offset
    trip = Triplets()
    rhs = np.zeros(size)
    tab = disc.vtab
    values = np.asarray(fn(tab.points.reshape(-1, 2)), dtype=float).reshape(tab.points.shape[:2] + (2,))
    for c in (0, 1):
        idx = disc.u_index[:, c]
        trip.add(idx[:, :, None], idx[:, None, :], disc.velocity_mass)
        np.add.at(rhs, idx.ravel(), np.einsum('kq,qa,kq->ka', tab.weights, tab.values, values[..., c]).ravel())
        div = disc.divergence[:, c]
        trip.add(disc.p_index[:, :, None], idx[:, None, :], div)
        trip.add(idx[:, :, None], disc.p_index[:, None, :], -np.swapaxes(div, 1, 2))
    pressure = disc.p_offset + np.arange(disc.np)
    trip.add(pressure, disc.mult_index, disc.pressure_mean)
    trip.add(disc.mult_index, pressure, disc.pressure_mean)
    stabilization = disc.pressure_stabilization()
    if stabilization is not None:
        trip.add(*stabilization)

    matrix = trip.tocsr(size).tolil()
    for i in disc.boundary_unknowns:
        matrix.rows[i] = [i]
        matrix.data[i] = [1.0]
    rhs[disc.boundary_unknowns] = 0.0
    matrix = matrix.tocsc()
    # the pressure test rows still carry boundary velocity columns, whose values are zero
    x = solve_linear(matrix, rhs, solver_options if solver_options is not None else disc.cfg.linear_solver)
    return np.stack([x[:disc.nu], x[disc.nu:2 * disc.nu]], axis=1)


def _stress_values(disc, fn):
    sigma = np.asarray(fn(disc.sdofs.anchor_points), dtype=float).reshape(disc.ns, 3)
    if disc.cfg.is_log:
        return spd_log(sigma)
    return sigma


def initial_state(disc, initial=None):
    """ State at n = 0 of the requested scenario

    :type disc: Discretization
    :param disc: spaces of the run

    :type initial: InitialCondition
    :param initial: scenario, equilibrium when omitted

    :return: State
    """
    initial = (initial or InitialCondition()).validate()
    m = disc.mesh
    velocity = np.zeros((disc.nu, 2))
    if initial.kind == InitialKind.EQUILIBRIUM:
        stress = _stress_values(disc, lambda x: np.tile(IDENTITY, (len(x), 1)))
    elif initial.kind == InitialKind.RELAXATION:
        stress = _stress_values(disc, lambda x: np.tile(initial.sigma0, (len(x), 1)))
    else:
        velocity = leray_projection(disc, vortex_velocity(m, initial.amplitude))
        stress = _stress_values(disc, vortex_stress(m, initial.perturbation))
    logger.debug(u"initial state {0}: max |u| {1:.3e}".format(initial.kind.value, float(np.abs(velocity).max())))
    flow = VelocityPressureState(disc.velocity_field(velocity), disc.pressure_field(np.zeros(disc.np)))
    return State(flow, disc.stress_field(stress), 0)
