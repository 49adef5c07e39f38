#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import collections

__all__ = ['Certificate', 'check_dissipation', 'dissipation_tolerance', 'dissipation_slack']

Certificate = collections.namedtuple('Certificate', ['n', 'slack', 'tol', 'passed'])
Certificate.__doc__ = """Discrete free energy inequality of step n: passed iff slack <= tol."""


def dissipation_tolerance(cfg, f0):
    """10 (fixed point tol + linear tol) max(1, F0)"""
    return 10.0 * (cfg.fixed_point.tol + cfg.linear_solver.tol) * max(1.0, float(f0))


def dissipation_slack(prev, record):
    """F^{n+1} - F^n + kinetic, viscous and stress dissipation of the step"""
    return record.F - prev.F + record.diss_kinetic + record.diss_viscous + record.diss_stress


def check_dissipation(prev, record, tol):
    """ certify the free energy inequality between two consecutive records

    :type prev: EnergyRecord
    :param prev: record of step n

    :type record: EnergyRecord
    :param record: record of step n + 1, carrying the dissipation of the step

    :return: Certificate
    """
    slack = dissipation_slack(prev, record)
    return Certificate(n=record.n, slack=slack, tol=float(tol), passed=bool(slack <= tol))
