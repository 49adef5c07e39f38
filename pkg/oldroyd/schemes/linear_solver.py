#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Sparse direct solve of the saddle point systems, with iterative refinement."""

import logging

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..exceptions import LinearSolverError
from .state import LinearSolveStats

__all__ = ['SparseLUSolver', 'solve_linear', 'estimate_condition', 'merge_stats', 'SINGULAR_PIVOT_RATIO']

logger = logging.getLogger(__name__)

SINGULAR_PIVOT_RATIO = 1e-13


def _factorize(matrix):
    a = sp.csc_matrix(matrix)
    if a.shape[0] != a.shape[1]:
        raise ValueError(u'expected a square matrix, got {0}'.format(a.shape))
    try:
        lu = spla.splu(a)
    except RuntimeError as ex:
        raise LinearSolverError(u'sparse LU factorization failed: {0}'.format(ex), pivot_ratio=0.0)
    diag = np.abs(lu.U.diagonal())
    top = float(diag.max()) if len(diag) else 1.0
    ratio = float(diag.min()) / top if top > 0.0 else 0.0
    return a, lu, ratio


def estimate_condition(matrix):
    """reciprocal of the smallest to largest pivot ratio of the sparse LU (inf when singular)"""
    try:
        _, _, ratio = _factorize(matrix)
    except LinearSolverError:
        return np.inf
    return np.inf if ratio == 0.0 else 1.0 / ratio


def merge_stats(stats):
    if not stats:
        return LinearSolveStats(solves=0, refinements=0, max_residual=0.0, min_pivot_ratio=1.0)
    return LinearSolveStats(solves=sum(s.solves for s in stats),
                            refinements=sum(s.refinements for s in stats),
                            max_residual=max(s.max_residual for s in stats),
                            min_pivot_ratio=min(s.min_pivot_ratio for s in stats))


class SparseLUSolver(object):
    """ superLU factorization followed by up to ``options.max_iters`` refinement sweeps

    :type options: LinearSolverOptions
    :param options: tol is the accepted relative residual
    """

    def __init__(self, options):
        self.options = options

    def solve(self, matrix, rhs):
        """
        :return: (x, LinearSolveStats)
        :raise LinearSolverError: singular matrix or residual above tolerance
        """
        rhs = np.asarray(rhs, dtype=float)
        a, lu, ratio = _factorize(matrix)
        if a.shape[0] != len(rhs):
            raise ValueError(u'rhs has {0} entries, matrix is {1}'.format(len(rhs), a.shape))
        if ratio < SINGULAR_PIVOT_RATIO:
            raise LinearSolverError(u'matrix is numerically singular (pivot ratio {0:.3e})'.format(ratio),
                                    pivot_ratio=ratio)

        norm_b = float(np.linalg.norm(rhs))
        if norm_b == 0.0:
            return np.zeros_like(rhs), LinearSolveStats(1, 0, 0.0, ratio)

        x = lu.solve(rhs)
        residual = rhs - a @ x
        rel = float(np.linalg.norm(residual)) / norm_b
        sweeps = 0
        while rel > self.options.tol and sweeps < self.options.max_iters:
            x = x + lu.solve(residual)
            residual = rhs - a @ x
            rel = float(np.linalg.norm(residual)) / norm_b
            sweeps += 1

        if not np.isfinite(rel) or rel > self.options.tol:
            raise LinearSolverError(u'relative residual {0:.3e} above {1:.1e} after {2} refinements'.format(
                rel, self.options.tol, sweeps), residual=rel, pivot_ratio=ratio)
        logger.debug(u"linear solve: n={0}, residual={1:.3e}, refinements={2}, pivot ratio={3:.3e}".format(
            len(rhs), rel, sweeps, ratio))
        return x, LinearSolveStats(1, sweeps, rel, ratio)


def solve_linear(matrix, rhs, cfg):
    """ solve ``matrix x = rhs`` with the residual tolerance of cfg.linear_solver

    :type cfg: SchemeConfig or LinearSolverOptions
    :return: numpy.ndarray
    """
    options = getattr(cfg, 'linear_solver', cfg)
    x, _ = SparseLUSolver(options).solve(matrix, rhs)
    return x
