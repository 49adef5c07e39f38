#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

from enum import Enum

from ..exceptions import ConfigError
from ..spaces import Family
from ..tensor_algebra import DEFAULT_DEGENERACY_TOL

__all__ = ['Formulation', 'Advection', 'Elements', 'StressSpace', 'Projector', 'PhysicalParams',
           'FixedPointOptions', 'LinearSolverOptions', 'SchemeConfig', 'VELOCITY_FAMILY', 'PRESSURE_FAMILY',
           'valid_combinations']


class Formulation(Enum):
    CONFORMATION = 'conformation'
    LOG = 'log'
    LIE = 'lie'


class Advection(Enum):
    CHARACTERISTIC = 'characteristic'
    DG = 'dg'


class Elements(Enum):
    SCOTT_VOGELIUS = 'scott-vogelius'
    TAYLOR_HOOD = 'taylor-hood'
    CROUZEIX_RAVIART = 'crouzeix-raviart'
    P1P1_STAB = 'p1p1-stab'
    P1P0_STAB = 'p1p0-stab'


class StressSpace(Enum):
    P0 = 'P0'
    P1DISC = 'P1disc'


class Projector(Enum):
    NONE = 'none'
    ROT = 'rot'
    RT0 = 'rt0'
    BDM = 'bdm'


VELOCITY_FAMILY = {
    Elements.SCOTT_VOGELIUS: Family.P2,
    Elements.TAYLOR_HOOD: Family.P2,
    Elements.CROUZEIX_RAVIART: Family.P1CR,
    Elements.P1P1_STAB: Family.P1,
    Elements.P1P0_STAB: Family.P1,
}

PRESSURE_FAMILY = {
    Elements.SCOTT_VOGELIUS: Family.P1DISC,
    Elements.TAYLOR_HOOD: Family.P1,
    Elements.CROUZEIX_RAVIART: Family.P0,
    Elements.P1P1_STAB: Family.P1,
    Elements.P1P0_STAB: Family.P0,
}

ALLOWED_PROJECTORS = {
    Elements.SCOTT_VOGELIUS: (Projector.NONE,),
    Elements.TAYLOR_HOOD: (Projector.ROT,),
    Elements.CROUZEIX_RAVIART: (Projector.ROT, Projector.RT0, Projector.BDM),
    Elements.P1P1_STAB: (Projector.ROT,),
    Elements.P1P0_STAB: (Projector.ROT,),
}


def _enum(cls, value, name):
    if isinstance(value, cls):
        return value
    try:
        return cls(value)
    except ValueError as ex:
        raise ConfigError(ex, settings=name,
                          msg=u'expected one of {0}'.format([e.value for e in cls]))


class PhysicalParams(object):
    """
    :type re: float
    :param re: Reynolds number, >= 0

    :type wi: float
    :param wi: Weissenberg number, > 0

    :type eps: float
    :param eps: elastic to total viscosity fraction, in (0, 1)
    """

    def __init__(self, re=1.0, wi=0.5, eps=0.5):
        self.re = float(re)
        self.wi = float(wi)
        self.eps = float(eps)

    def validate(self):
        if not self.re >= 0.0:
            raise ConfigError(settings='params.re', msg=u'Reynolds number must be >= 0, got {0}'.format(self.re))
        if not self.wi > 0.0:
            raise ConfigError(settings='params.wi', msg=u'Weissenberg number must be > 0, got {0}'.format(self.wi))
        if not 0.0 < self.eps < 1.0:
            raise ConfigError(settings='params.eps', msg=u'eps must lie in (0, 1), got {0}'.format(self.eps))

    def __repr__(self):
        return 'PhysicalParams(re={0!r}, wi={1!r}, eps={2!r})'.format(self.re, self.wi, self.eps)


class FixedPointOptions(object):
    def __init__(self, tol=1e-10, max_iters=50):
        self.tol = float(tol)
        self.max_iters = int(max_iters)

    def validate(self):
        if not self.tol > 0.0 or self.max_iters < 1:
            raise ConfigError(settings='fixed_point', msg=u'need tol > 0 and max_iters >= 1')


class LinearSolverOptions(object):
    """
    :type tol: float
    :param tol: accepted relative residual ||A x - b|| / ||b||

    :type max_iters: int
    :param max_iters: iterative refinement sweeps allowed on top of the sparse LU solve
    """

    def __init__(self, tol=1e-10, max_iters=3):
        self.tol = float(tol)
        self.max_iters = int(max_iters)

    def validate(self):
        if not self.tol > 0.0 or self.max_iters < 0:
            raise ConfigError(settings='linear_solver', msg=u'need tol > 0 and max_iters >= 0')


class SchemeConfig(object):
    """ Options of one time discretization.

    :type formulation: Formulation
    :param formulation: conformation, log or lie

    :type advection: Advection
    :param advection: characteristic or dg

    :type elements: Elements
    :param elements: velocity/pressure pair

    :type stress_space: StressSpace
    :param stress_space: P0 or P1disc

    :type velocity_projector: Projector
    :param velocity_projector: projection applied to the advecting velocity

    :type dt: float
    :param dt: time step

    :type params: PhysicalParams
    :param params: Re, Wi, eps

    :type fixed_point: FixedPointOptions
    :param fixed_point: stopping rule of the per-step fixed point

    :type linear_solver: LinearSolverOptions
    :param linear_solver: residual tolerance of each linear solve

    :type degeneracy_tol: float
    :param degeneracy_tol: relative eigenvalue gap below which the gradient decomposition uses its isotropic branch

    :type flow_substeps: int
    :param flow_substeps: Runge-Kutta substeps of the backward characteristic flow

    :type freeze_velocity: bool
    :param freeze_velocity: keep (u, p) at their current values and advance the stress only

    :type pressure_stabilization: bool
    :param pressure_stabilization: add the pressure stabilization of the p1p1/p1p0 pairs

    :type edge_points: int
    :param edge_points: Gauss points per edge for DG terms

    :type quadrature_order: int
    :param quadrature_order: triangle quadrature degree for element integrals
    """

    def __init__(self, formulation=Formulation.CONFORMATION, advection=Advection.CHARACTERISTIC,
                 elements=Elements.SCOTT_VOGELIUS, stress_space=StressSpace.P0, velocity_projector=None,
                 dt=0.01, params=None, fixed_point=None, linear_solver=None, degeneracy_tol=DEFAULT_DEGENERACY_TOL,
                 flow_substeps=4, freeze_velocity=False, pressure_stabilization=True, edge_points=2,
                 quadrature_order=6):
        self.formulation = _enum(Formulation, formulation, 'scheme.formulation')
        self.advection = _enum(Advection, advection, 'scheme.advection')
        self.elements = _enum(Elements, elements, 'scheme.elements')
        self.stress_space = _enum(StressSpace, stress_space, 'scheme.stress_space')
        if velocity_projector is None:
            velocity_projector = ALLOWED_PROJECTORS[self.elements][0]
        self.velocity_projector = _enum(Projector, velocity_projector, 'scheme.velocity_projector')
        self.dt = float(dt)
        self.params = params or PhysicalParams()
        self.fixed_point = fixed_point or FixedPointOptions()
        self.linear_solver = linear_solver or LinearSolverOptions()
        self.degeneracy_tol = float(degeneracy_tol)
        self.flow_substeps = int(flow_substeps)
        self.freeze_velocity = bool(freeze_velocity)
        self.pressure_stabilization = bool(pressure_stabilization)
        self.edge_points = int(edge_points)
        self.quadrature_order = int(quadrature_order)

    @property
    def velocity_family(self):
        return VELOCITY_FAMILY[self.elements]

    @property
    def pressure_family(self):
        return PRESSURE_FAMILY[self.elements]

    @property
    def stress_family(self):
        return Family.P0 if self.stress_space == StressSpace.P0 else Family.P1DISC

    @property
    def is_log(self):
        return self.formulation == Formulation.LOG

    @property
    def experimental(self):
        """rot projected velocity driving DG advection"""
        return self.velocity_projector == Projector.ROT and self.advection == Advection.DG

    def validate(self):
        """ check parameter ranges and the compatibility rules between elements, projectors and formulations

        :raise ConfigError:
        """
        self.params.validate()
        self.fixed_point.validate()
        self.linear_solver.validate()
        if not self.dt > 0.0:
            raise ConfigError(settings='scheme.dt', msg=u'dt must be > 0, got {0}'.format(self.dt))
        if not self.degeneracy_tol > 0.0:
            raise ConfigError(settings='scheme.degeneracy_tol', msg=u'degeneracy_tol must be > 0')
        if self.flow_substeps < 1:
            raise ConfigError(settings='scheme.flow_substeps', msg=u'flow_substeps must be >= 1')
        if self.edge_points < 1:
            raise ConfigError(settings='scheme.edge_points', msg=u'edge_points must be >= 1')
        if self.quadrature_order not in (1, 2, 3, 6):
            raise ConfigError(settings='scheme.quadrature_order', msg=u'quadrature_order must be 1, 2, 3 or 6')

        allowed = ALLOWED_PROJECTORS[self.elements]
        if self.velocity_projector not in allowed:
            raise ConfigError(settings='scheme.velocity_projector',
                              msg=u'{0} with {1} advection needs a velocity projector in {2}, got {3}'.format(
                                  self.elements.value, self.advection.value, [p.value for p in allowed],
                                  self.velocity_projector.value))
        if self.formulation == Formulation.LIE:
            if self.stress_space != StressSpace.P0 or self.elements != Elements.SCOTT_VOGELIUS:
                raise ConfigError(settings='scheme.formulation',
                                  msg=u'the lie formulation needs P0 stress and scott-vogelius elements')
            if self.advection != Advection.CHARACTERISTIC:
                raise ConfigError(settings='scheme.advection',
                                  msg=u'the lie formulation transports the stress along characteristics')
        return self

    def tag(self):
        return u'{0}/{1}/{2}/{3}/{4}'.format(self.formulation.value, self.advection.value, self.elements.value,
                                              self.stress_space.value, self.velocity_projector.value)

    def __repr__(self):
        return 'SchemeConfig({0}, dt={1!r}, {2!r})'.format(self.tag(), self.dt, self.params)


def valid_combinations():
    """every (formulation, advection, elements, stress_space, projector) accepted by validate"""
    combos = []
    for formulation in Formulation:
        for advection in Advection:
            for elements in Elements:
                for stress in StressSpace:
                    for projector in ALLOWED_PROJECTORS[elements]:
                        cfg = SchemeConfig(formulation, advection, elements, stress, projector)
                        try:
                            cfg.validate()
                        except ConfigError:
                            continue
                        combos.append((formulation, advection, elements, stress, projector))
    return combos
