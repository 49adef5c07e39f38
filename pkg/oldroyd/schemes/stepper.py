#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import numpy as np

from ..exceptions import DomainError, MatrixOverflowError, NonConvergenceError, PositivityError
from ..tensor_algebra import check_spd, sym_eig
from ..util import Util
from .assembly import SchemeAssembler, prepare_step
from .discretization import Discretization
from .linear_solver import SparseLUSolver, merge_stats
from .state import FixedPointResult, StepReport

__all__ = ['Stepper', 'step', 'fixed_point_solve']


class Stepper(object):
    """ advances a State by one time step of the configured scheme

    The Discretization (dof maps, static element blocks) is built once and
    reused by every step.

    :type m: Mesh
    :param m: mesh

    :type cfg: SchemeConfig
    :param cfg: scheme options, validated on construction
    """

    def __init__(self, m, cfg, disc=None):
        self.mesh = m
        self.cfg = cfg
        self.disc = disc or Discretization(m, cfg)
        self.assembler = SchemeAssembler(self.disc)
        self.solver = SparseLUSolver(cfg.linear_solver)
        self.logger = Util.get_run_logger(cfg, __name__)
        if cfg.experimental:
            self.logger.warning(u"rot projected velocity with DG advection is experimental")

    def fixed_point_solve(self, state, context=None):
        """ iterate linearized solves from the previous step until the relative update is below tol

        :return: FixedPointResult
        :raise NonConvergenceError: max_iters passes without meeting the tolerance
        """
        cfg = self.cfg
        context = context if context is not None else prepare_step(state, cfg, self.disc)
        x = self.disc.pack(state)
        history = []
        stats = []
        update = np.inf
        for iteration in range(1, cfg.fixed_point.max_iters + 1):
            try:
                matrix, rhs = self.assembler.assemble(state, context, x)
            except MatrixOverflowError as ex:
                raise NonConvergenceError(u'fixed point diverged: {0}'.format(ex.get_error_message()),
                                          last_iterate=self.disc.unpack(x, state.n + 1), iterations=iteration,
                                          update=update)
            x_new, linear = self.solver.solve(matrix, rhs)
            stats.append(linear)
            update = Util.relative_update(x_new, x)
            history.append(update)
            x = x_new
            self.logger.debug(u"step {0} pass {1}: update={2:.3e}, residual={3:.3e}".format(
                state.n + 1, iteration, update, linear.max_residual))
            if not np.isfinite(update):
                break
            if update < cfg.fixed_point.tol:
                return FixedPointResult(solution=x, iterations=iteration, update=update, history=history,
                                        linear=merge_stats(stats))

        raise NonConvergenceError(u'fixed point not converged after {0} passes, last update {1:.3e}'.format(
            len(history), update), last_iterate=self.disc.unpack(x, state.n + 1), iterations=len(history),
            update=update)

    def min_eigenvalue(self, state):
        """ smallest eigenvalue of pi_h sigma (of e^{pi_h psi} for the log formulation)

        Positivity is required of the barycenter values only; for P1disc stress the
        nodal eigenvalues are logged at DEBUG level and may be negative.

        :raise PositivityError: pi_h sigma is not SPD on some element
        """
        s = state.stress.coefficients
        pi = self.disc.barycenter_stress(s)
        if not self.disc.is_p0_stress():
            self.logger.debug(u"step {0}: nodal stress min eigenvalue {1:.6e}".format(
                state.n, float(sym_eig(s)[0][:, 1].min())))
        if self.cfg.is_log:
            return float(np.exp(sym_eig(pi)[0][:, 1].min()))
        try:
            return float(np.min(check_spd(pi)))
        except DomainError as ex:
            raise PositivityError(int(ex.index), ex.eigenvalue)

    def step(self, state):
        """ :return: (State, StepReport) """
        context = prepare_step(state, self.cfg, self.disc)
        result = self.fixed_point_solve(state, context)
        new = self.disc.unpack(result.solution, state.n + 1)
        min_eig = self.min_eigenvalue(new)
        report = StepReport(n=new.n, fp_iters=result.iterations, update=result.update,
                            residual=result.linear.max_residual, linear=result.linear, min_eig=min_eig,
                            transport_defect=context.transport_defect, remap_residual=context.remap_residual,
                            experimental=self.cfg.experimental)
        self.logger.debug(u"step {0}: {1} passes, min eigenvalue {2:.6e}, transport defect {3:.3e}".format(
            new.n, result.iterations, min_eig, context.transport_defect))
        return new, report


def step(state, cfg, m):
    """one time step; see Stepper.step"""
    return Stepper(m, cfg).step(state)


def fixed_point_solve(state, cfg, m):
    return Stepper(m, cfg).fixed_point_solve(state)
