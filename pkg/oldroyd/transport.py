#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Advection helpers: backward characteristics, conservative remap and DG upwind data."""

import collections
import logging

import numpy as np
import scipy.sparse as sp

from .exceptions import ContractViolationError, LocationError, TransportError
from .mesh import locate_points
from .projections import velocity_values
from .quadrature import edge_quadrature

__all__ = ['CharacteristicFeet', 'EdgeUpwindData', 'RemapReport', 'AnalyticVelocity', 'integrate_backward_flow',
           'pullback_field', 'build_edge_upwind', 'upwind_jump_integral', 'boundary_flux_integral',
           'clip_polygon', 'polygon_area', 'remap_cell_averages', 'REMAP_BALANCE_TOL']

logger = logging.getLogger(__name__)

NORMAL_JUMP_TOL = 1e-10
REMAP_BALANCE_TOL = 1e-10

CharacteristicFeet = collections.namedtuple('CharacteristicFeet', ['points', 'feet', 'elements', 'bary'])
CharacteristicFeet.__doc__ = """feet[p] = X(t^n, points[p]); elements/bary locate every foot"""

EdgeUpwindData = collections.namedtuple('EdgeUpwindData', ['edges', 't', 'weights', 'un', 'upstream',
                                                           'downstream', 'downstream_side', 'points'])
EdgeUpwindData.__doc__ = """Upwind bookkeeping on internal edges.

edges: (ni,) internal edge indices
t: (q,) edge parameters of the quadrature points
weights: (ni, q) quadrature weights scaled by the edge length
un: (ni, q) signed u . n_E
upstream, downstream: (ni, q) element indices
downstream_side: (ni, q) 1 when the downstream element is the right element of the edge
points: (ni, q, 2) physical points
"""

RemapReport = collections.namedtuple('RemapReport', ['area_defect', 'balance_iterations', 'balance_residual',
                                                     'identity', 'balanced'])
RemapReport.__doc__ = """area_defect: sum_K ||X(K)| - |K|| / |D|; balance_residual: conservation residual of the
row-normalized weights; balanced: balance_residual <= the requested tolerance"""


class AnalyticVelocity(object):
    """wrap a closed form field fn(points (n, 2)) -> (n, 2) as an advecting velocity"""

    components = 2

    def __init__(self, m, fn):
        self.mesh = m
        self.fn = fn

    def values(self, k, bary):
        return np.asarray(self.fn(self.mesh.to_physical(np.atleast_1d(k), bary)), dtype=float)

    def evaluate_points(self, xs, hints=None):
        hints = np.zeros(len(xs), dtype=np.int64) if hints is None else hints
        return np.asarray(self.fn(xs), dtype=float), hints


def _evaluate(u, xs, hints):
    try:
        return u.evaluate_points(xs, hints)
    except LocationError as ex:
        raise TransportError(u'characteristic left the domain: {0}'.format(ex.get_error_message()), cause=ex)


def integrate_backward_flow(m, u, points, dt, substeps=4, hints=None, pinned=None):
    """ feet of the characteristics through ``points``

    Integrates dX/dt = u(X) from X(t^{n+1}) = x back to t^n with ``substeps``
    classical Runge-Kutta steps of size dt / substeps.

    :type u: FEField or ProjectedVelocity or AnalyticVelocity
    :param u: advecting velocity, frozen over the step

    :type pinned: array_like
    :param pinned: optional boolean mask of points that stay in place; they are never
        evaluated, so the velocity may be tangential or undefined there

    :return: CharacteristicFeet
    """
    if dt <= 0:
        raise ValueError(u'dt must be positive, got {0}'.format(dt))
    if substeps < 1:
        raise ValueError(u'substeps must be >= 1, got {0}'.format(substeps))

    points = np.asarray(points, dtype=float)
    x = points.copy()
    tau = float(dt) / substeps
    elements = np.zeros(len(points), dtype=np.int64) if hints is None else np.array(hints, dtype=np.int64)
    free = np.ones(len(points), dtype=bool) if pinned is None else ~np.asarray(pinned, dtype=bool)

    y = x[free]
    hint = elements[free]
    for _ in range(substeps if len(y) else 0):
        k1, hint = _evaluate(u, y, hint)
        k2, _ = _evaluate(u, y - 0.5 * tau * k1, hint)
        k3, _ = _evaluate(u, y - 0.5 * tau * k2, hint)
        k4, _ = _evaluate(u, y - tau * k3, hint)
        y = y - (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    x[free] = y
    elements[free] = hint

    try:
        elements, bary = locate_points(m, x, elements)
    except LocationError as ex:
        raise TransportError(u'characteristic foot outside the domain: {0}'.format(ex.get_error_message()), cause=ex)
    return CharacteristicFeet(points=points, feet=x, elements=elements, bary=bary)


def pullback_field(f, feet):
    """(n, 3) values of the tensor field f at the feet"""
    return f.values(feet.elements, feet.bary)


def build_edge_upwind(m, u, points=2, tol=NORMAL_JUMP_TOL):
    """ upstream/downstream labels and |u . n| at the Gauss points of every internal edge

    The downstream element is the one the flow enters: the right element where
    u . n_E > 0, the left element where u . n_E < 0.

    :raise ContractViolationError: u . n_E differs between the two sides of an edge
    """
    edges = m.internal_edges
    t, w = edge_quadrature(points)
    q = len(t)
    kl, bl = m.edge_barycentric(edges, 0, t)
    kr, br = m.edge_barycentric(edges, 1, t)
    vl = velocity_values(u, m, np.repeat(kl, q), bl.reshape(-1, 3)).reshape(len(edges), q, 2)
    vr = velocity_values(u, m, np.repeat(kr, q), br.reshape(-1, 3)).reshape(len(edges), q, 2)
    normals = m.edge_normals[edges]
    un_l = np.einsum('eqx,ex->eq', vl, normals)
    un_r = np.einsum('eqx,ex->eq', vr, normals)

    jump = np.abs(un_l - un_r)
    scale = 1.0 + max(float(np.abs(vl).max(initial=0.0)), float(np.abs(vr).max(initial=0.0)))
    if np.any(jump > tol * scale):
        j = int(np.argmax(jump.max(axis=1)))
        raise ContractViolationError(int(edges[j]), float(jump[j].max()))

    un = 0.5 * (un_l + un_r)
    right_down = un >= 0.0
    left = np.repeat(kl[:, None], q, axis=1)
    right = np.repeat(kr[:, None], q, axis=1)
    a = m.vertices[m.edges[edges, 0]]
    b = m.vertices[m.edges[edges, 1]]
    pts = a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]
    return EdgeUpwindData(edges=edges, t=t, weights=m.edge_lengths[edges][:, None] * w[None, :], un=un,
                          upstream=np.where(right_down, left, right), downstream=np.where(right_down, right, left),
                          downstream_side=right_down.astype(np.int64), points=pts)


def upwind_jump_integral(upwind, values):
    """sum over internal edges of int |u.n| [phi], [phi] = downstream - upstream, for P0 data"""
    values = np.asarray(values, dtype=float)
    jump = values[upwind.downstream] - values[upwind.upstream]
    coef = upwind.weights * np.abs(upwind.un)
    return np.tensordot(coef, jump, axes=([0, 1], [0, 1]))


def boundary_flux_integral(m, u, values, points=2):
    """-sum_K int_{dK} (u . n_K) phi_K for P0 data, each element reading u from its own side"""
    values = np.asarray(values, dtype=float)
    t, w = edge_quadrature(points)
    q = len(t)
    total = np.zeros(values.shape[1:])
    for side in (0, 1):
        edges = np.flatnonzero(m.edge_elements[:, side] >= 0)
        k, bary = m.edge_barycentric(edges, side, t)
        vals = velocity_values(u, m, np.repeat(k, q), bary.reshape(-1, 3)).reshape(len(edges), q, 2)
        flux = m.edge_lengths[edges] * (np.einsum('eqx,ex->eq', vals, m.edge_normals[edges]) @ w)
        sign = 1.0 if side == 0 else -1.0
        total -= np.tensordot(sign * flux, values[k], axes=(0, 0))
    return total


def polygon_area(poly):
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_polygon(subject, clip):
    """ Sutherland-Hodgman intersection of a convex polygon with a counterclockwise convex polygon

    :return: (n, 2) vertices of the intersection, possibly empty
    """
    output = list(subject)
    nc = len(clip)
    for i in range(nc):
        if not output:
            break
        a, b = clip[i], clip[(i + 1) % nc]
        ex, ey = b[0] - a[0], b[1] - a[1]
        polygon, output = output, []
        side = [ex * (p[1] - a[1]) - ey * (p[0] - a[0]) for p in polygon]
        for j in range(len(polygon)):
            p, sp_ = polygon[j], side[j]
            qv, sq = polygon[j - 1], side[j - 1]
            if sp_ >= 0.0:
                if sq < 0.0:
                    output.append(qv + (p - qv) * (sq / (sq - sp_)))
                output.append(p)
            elif sq >= 0.0:
                output.append(qv + (p - qv) * (sq / (sq - sp_)))
    return np.array(output).reshape(-1, 2)


def _overlap_matrix(m, mapped, seeds):
    rows, cols, vals = [], [], []
    tris = m.vertices[m.triangles]
    floor = 1e-15 * m.areas
    for k in range(m.n_triangles):
        poly = mapped[k]
        lo, hi = poly.min(axis=0), poly.max(axis=0)
        queue = list(dict.fromkeys([k] + [int(s) for s in seeds[k]]))
        visited = set(queue)
        while queue:
            e = queue.pop()
            tri = tris[e]
            if np.any(tri.max(axis=0) < lo) or np.any(tri.min(axis=0) > hi):
                continue
            area = polygon_area(clip_polygon(poly, tri))
            if area <= floor[k]:
                continue
            rows.append(k)
            cols.append(e)
            vals.append(area)
            for nb in m.neighbors[e]:
                nb = int(nb)
                if nb >= 0 and nb not in visited:
                    visited.add(nb)
                    queue.append(nb)
    n = m.n_triangles
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _safe_ratio(target, sums):
    sums = np.asarray(sums).ravel()
    return np.where(sums > 0.0, target / np.where(sums > 0.0, sums, 1.0), 0.0)


def remap_cell_averages(m, vertex_feet, values, foot_elements=None, tol=1e-14, max_iters=500,
                        balance_tol=REMAP_BALANCE_TOL):
    """ conservative pull-back of piecewise constant data along the characteristics

    Every triangle K is mapped through the feet of its vertices; the overlap
    areas |X(K) n K'| are balanced so that each row sums to |K| and each column
    to |K'|, and the remapped value of K is the overlap-weighted average of the
    values of the K' it came from. The weights of every row are normalized to
    one after balancing, so the result is always a convex combination and
    constants are reproduced exactly; whatever the balancing did not reach
    shows up as the conservation residual max |sum_K |K| w_KK' / |K'| - 1|.

    :type vertex_feet: array_like
    :param vertex_feet: (NV, 2) feet of the mesh vertices

    :type values: array_like
    :param values: (NT,) or (NT, c) cell values

    :type balance_tol: float
    :param balance_tol: conservation residual above which the report is not ``balanced``

    :return: (averages like values, RemapReport)
    :raise TransportError: the mapped triangulation folds over
    """
    values = np.asarray(values, dtype=float)
    feet = np.asarray(vertex_feet, dtype=float)
    if np.array_equal(feet, m.vertices):
        return values.copy(), RemapReport(area_defect=0.0, balance_iterations=0, balance_residual=0.0, identity=True,
                                          balanced=True)

    mapped = feet[m.triangles]
    e1 = mapped[:, 1] - mapped[:, 0]
    e2 = mapped[:, 2] - mapped[:, 0]
    mapped_areas = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    if np.any(mapped_areas <= 0.0):
        k = int(np.argmin(mapped_areas))
        raise TransportError(u'characteristic map folds triangle {0} (mapped area {1:.3e})'.format(
            k, float(mapped_areas[k])), code='FoldedCharacteristicMesh')

    if foot_elements is None:
        foot_elements, _ = locate_points(m, feet, m.vertex_element)
    overlap = _overlap_matrix(m, mapped, np.asarray(foot_elements)[m.triangles])

    area_defect = float(np.abs(mapped_areas - m.areas).sum() / m.areas.sum())
    target = m.areas
    iterations = 0
    for iterations in range(1, max_iters + 1):
        overlap = sp.diags(_safe_ratio(target, overlap.sum(axis=1))) @ overlap
        overlap = overlap @ sp.diags(_safe_ratio(target, overlap.sum(axis=0)))
        row_error = float(np.max(np.abs(np.asarray(overlap.sum(axis=1)).ravel() / target - 1.0)))
        if row_error <= tol:
            break

    weights = sp.diags(_safe_ratio(1.0, overlap.sum(axis=1))) @ overlap
    residual = float(np.max(np.abs((weights.T @ target) / target - 1.0)))
    balanced = residual <= balance_tol
    if not balanced:
        logger.warning(u"remap conservation residual {0:.3e} after {1} balancing iterations".format(
            residual, iterations))

    averages = weights @ values
    return averages, RemapReport(area_defect=area_defect, balance_iterations=iterations, balance_residual=residual,
                                 identity=False, balanced=balanced)
