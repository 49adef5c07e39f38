#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import collections

__all__ = ['VelocityPressureState', 'State', 'StepReport', 'FixedPointResult', 'LinearSolveStats']


class VelocityPressureState(object):
    """discrete velocity (vector FEField) and pressure (scalar FEField)"""

    def __init__(self, velocity, pressure):
        self.velocity = velocity
        self.pressure = pressure


class State(object):
    """ Snapshot of the unknowns at time index ``n``.

    ``stress`` holds sigma for the conformation and lie formulations and
    psi = ln sigma for the log formulation.
    """

    def __init__(self, flow, stress, n=0):
        self.flow = flow
        self.stress = stress
        self.n = int(n)

    @property
    def velocity(self):
        return self.flow.velocity

    @property
    def pressure(self):
        return self.flow.pressure

    @property
    def mesh(self):
        return self.stress.mesh

    def replace(self, velocity=None, pressure=None, stress=None, n=None):
        flow = VelocityPressureState(velocity if velocity is not None else self.velocity,
                                     pressure if pressure is not None else self.pressure)
        return State(flow, stress if stress is not None else self.stress, self.n if n is None else n)


LinearSolveStats = collections.namedtuple('LinearSolveStats', ['solves', 'refinements', 'max_residual',
                                                               'min_pivot_ratio'])

FixedPointResult = collections.namedtuple('FixedPointResult', ['solution', 'iterations', 'update', 'history',
                                                               'linear'])
FixedPointResult.__doc__ = """solution: final unknown vector; history: relative update of every pass"""

StepReport = collections.namedtuple('StepReport', ['n', 'fp_iters', 'update', 'residual', 'linear', 'min_eig',
                                                   'transport_defect', 'remap_residual', 'experimental'])
StepReport.__doc__ = """Per step solver statistics.

fp_iters: fixed point passes; update: final relative update; residual: worst
relative linear residual; linear: LinearSolveStats; min_eig: smallest stress
eigenvalue (sigma, or e^psi for the log formulation); transport_defect:
area-preservation defect of the characteristic map (0 for DG); remap_residual:
conservation residual of the characteristic remap (0 for DG).
"""
