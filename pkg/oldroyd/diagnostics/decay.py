#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Exponential decay of the free energy."""

import collections
import logging

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..projections import p1_stiffness

__all__ = ['DecayFit', 'estimate_decay_rate', 'theoretical_decay_rate', 'estimate_poincare_constant']

logger = logging.getLogger(__name__)

ENERGY_FLOOR = 1e-14
MIN_RECORDS = 10

DecayFit = collections.namedtuple('DecayFit', ['slope', 'residual', 'used', 'truncated'])
DecayFit.__doc__ = """slope of ln F against t, RMS residual of the fit, number of records used,
and whether records below the energy floor were dropped (slope is nan when fewer than two remain)"""


def estimate_decay_rate(records, tail=0.5, floor=ENERGY_FLOOR):
    """ least squares slope of ln F over the tail of a run

    :type records: list of EnergyRecord
    :param records: consecutive records of one run

    :type tail: float
    :param tail: fraction of the usable records fitted, counted from the end

    :return: DecayFit
    """
    if len(records) < MIN_RECORDS:
        logger.warning(u"decay fit on {0} records, at least {1} are expected".format(len(records), MIN_RECORDS))
    # stop at the first record below the floor
    usable = list(records)
    for i, r in enumerate(records):
        if not r.F > floor:
            usable = records[:i]
            break
    truncated = len(usable) < len(records)
    if len(usable) < 2:
        return DecayFit(slope=float('nan'), residual=float('nan'), used=len(usable), truncated=True)

    start = min(int(len(usable) * (1.0 - tail)), len(usable) - 2)
    window = usable[start:]
    t = np.array([r.time for r in window])
    y = np.log([r.F for r in window])
    slope, intercept = np.polyfit(t, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * t + intercept)) ** 2)))
    return DecayFit(slope=float(slope), residual=residual, used=len(window), truncated=truncated)


def theoretical_decay_rate(params, poincare):
    """min(2(1 - eps) / (Re C_P), 1/Wi); the velocity branch is unbounded for Re = 0"""
    velocity_rate = np.inf if params.re == 0.0 else 2.0 * (1.0 - params.eps) / (params.re * poincare)
    return float(min(velocity_rate, 1.0 / params.wi))


def estimate_poincare_constant(m):
    """ C_P = 1 / lambda_1 of the P1 Dirichlet Laplacian, int |v|^2 <= C_P int |grad v|^2

    :raise ValueError: the mesh has no interior vertex
    """
    interior = np.flatnonzero(~m.boundary_vertices)
    if len(interior) == 0:
        raise ValueError(u'the mesh has no interior vertex')
    stiffness = p1_stiffness(m)[interior][:, interior].tocsc()
    local = (m.areas / 12.0)[:, None, None] * (np.ones((3, 3)) + np.eye(3))[None]
    rows = np.repeat(m.triangles, 3, axis=1).ravel()
    cols = np.tile(m.triangles, (1, 3)).ravel()
    mass = sp.coo_matrix((local.ravel(), (rows, cols)), shape=(m.n_vertices, m.n_vertices)).tocsr()
    mass = mass[interior][:, interior].tocsc()
    if len(interior) <= 2:
        values = scipy.linalg.eigh(stiffness.toarray(), mass.toarray(), eigvals_only=True)
        return float(1.0 / values.min())
    values = spla.eigsh(stiffness, k=1, M=mass, sigma=0.0, which='LM', return_eigenvectors=False)
    return float(1.0 / values.min())
