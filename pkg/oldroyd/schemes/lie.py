#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import numpy as np

from ..exceptions import StepSizeError
from ..tensor_algebra import IDENTITY, from_full, to_full

__all__ = ['lie_step_local', 'LIE_DET_TOL']

LIE_DET_TOL = 1e-12


def lie_step_local(sigma_bar, g, dt, wi):
    """ element update of the Lie scheme

    (1 + dt/Wi) sigma = A^-1 sigma_bar A^-T + (dt/Wi) I,  A = I - dt g

    :type sigma_bar: array_like
    :param sigma_bar: packed stress transported to the element, shape (..., 3)

    :type g: array_like
    :param g: element velocity gradient, shape (..., 2, 2)

    :return: packed stress, SPD whenever sigma_bar is
    :raise StepSizeError: |det A| < 1e-12
    """
    sigma_bar = np.asarray(sigma_bar, dtype=float)
    g = np.asarray(g, dtype=float)
    a = np.eye(2) - dt * g
    det = a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    if np.any(np.abs(det) < LIE_DET_TOL):
        worst = float(np.min(np.abs(det)))
        raise StepSizeError(u'I - dt grad u is singular (|det| = {0:.3e}), reduce dt'.format(worst),
                            determinant=worst)

    inv = np.empty_like(a)
    inv[..., 0, 0] = a[..., 1, 1]
    inv[..., 0, 1] = -a[..., 0, 1]
    inv[..., 1, 0] = -a[..., 1, 0]
    inv[..., 1, 1] = a[..., 0, 0]
    inv = inv / det[..., None, None]

    pulled = from_full(inv @ to_full(sigma_bar) @ np.swapaxes(inv, -1, -2))
    ratio = dt / wi
    return (pulled + ratio * IDENTITY) / (1.0 + ratio)
