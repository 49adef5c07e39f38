#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Triangle and edge quadrature rules.

Triangle rules are given in barycentric coordinates with weights normalized to
sum to one, so that ``int_K f = |K| * sum_q w_q f(x_q)``.
"""

import collections

import numpy as np

__all__ = ['QuadratureRule', 'SUPPORTED_ORDERS', 'quadrature', 'edge_quadrature']

QuadratureRule = collections.namedtuple('QuadratureRule', ['points', 'weights', 'order'])

SUPPORTED_ORDERS = (1, 2, 3, 6)


def _orbit3(a, b):
    return [(a, b, b), (b, a, b), (b, b, a)]


def _orbit6(a, b, c):
    return [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]


def _build(order):
    if order == 1:
        points = [(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)]
        weights = [1.0]
    elif order == 2:
        points = _orbit3(2.0 / 3.0, 1.0 / 6.0)
        weights = [1.0 / 3.0] * 3
    elif order == 3:
        # Strang-Fix six point rule
        points = _orbit6(0.659027622374092, 0.231933368553031, 0.109039009072877)
        weights = [1.0 / 6.0] * 6
    elif order == 6:
        # Dunavant degree 6, twelve points
        points = (_orbit3(0.501426509658179, 0.249286745170910)
                  + _orbit3(0.873821971016996, 0.063089014491502)
                  + _orbit6(0.053145049844817, 0.310352451033784, 0.636502499121399))
        weights = [0.116786275726379] * 3 + [0.050844906370207] * 3 + [0.082851075618374] * 6
    else:
        raise ValueError(u'unsupported quadrature order {0}, expected one of {1}'.format(order, SUPPORTED_ORDERS))

    points = np.array(points, dtype=float)
    points /= points.sum(axis=1, keepdims=True)
    weights = np.array(weights, dtype=float)
    return QuadratureRule(points=points, weights=weights / weights.sum(), order=order)


_CACHE = {}


def quadrature(order):
    """ triangle rule exact for polynomials up to ``order``

    :type order: int
    :param order: one of 1, 2, 3, 6

    :return: QuadratureRule(points (nq, 3) barycentric, weights (nq,) summing to 1, order)
    """
    if order not in _CACHE:
        _CACHE[order] = _build(order)
    return _CACHE[order]


def edge_quadrature(n=2):
    """Gauss-Legendre rule on [0, 1]: (parameters (n,), weights (n,) summing to 1)"""
    if n < 1:
        raise ValueError(u'edge quadrature needs at least one point')
    x, w = np.polynomial.legendre.leggauss(int(n))
    return 0.5 * (x + 1.0), 0.5 * w
