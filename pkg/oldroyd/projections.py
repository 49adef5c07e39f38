#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Velocity projections with single-valued normal traces.

Every projection is stored as a per-element affine field
``v(x) = a_k + M_k (x - theta_k)``, plus the raw coefficients of its
representation (curl potential, edge fluxes or edge moments).
"""

import logging
from enum import Enum

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import ProjectionError
from .mesh import locate_points
from .quadrature import edge_quadrature, quadrature

__all__ = ['Representation', 'ProjectedVelocity', 'project_rot', 'project_rt0', 'project_bdm',
           'p1_stiffness', 'interpolation_error', 'velocity_values']

logger = logging.getLogger(__name__)

POISSON_TOL = 1e-12


class Representation(Enum):
    ROT = 'rot'
    RT0 = 'rt0'
    BDM = 'bdm'


def velocity_values(u, m, k, bary):
    """values (n, 2) of a velocity-like object at (element, barycentric) points

    ``u`` is a vector FEField, a ProjectedVelocity or a callable of physical points.
    """
    if hasattr(u, 'values'):
        return u.values(k, bary)
    return np.asarray(u(m.to_physical(k, bary)), dtype=float)


class ProjectedVelocity(object):
    """ piecewise affine velocity produced by a projection

    :type representation: Representation
    :param representation: which projection built the field

    :type coefficients: numpy.ndarray
    :param coefficients: potential (NV,), fluxes (NE,) or moments (NE, 2)

    :type offset: numpy.ndarray
    :param offset: (NT, 2) value at the barycenter

    :type slope: numpy.ndarray
    :param slope: (NT, 2, 2) constant gradient per element
    """

    components = 2

    def __init__(self, m, representation, coefficients, offset, slope):
        self.mesh = m
        self.representation = representation
        self.coefficients = coefficients
        self.offset = offset
        self.slope = slope

    def values(self, k, bary):
        k = np.atleast_1d(k)
        x = self.mesh.to_physical(k, bary)
        return self.offset[k] + np.einsum('nij,nj->ni', self.slope[k], x - self.mesh.barycenters[k])

    def gradients(self, k, bary):
        k = np.atleast_1d(k)
        return self.slope[k]

    def at_quadrature(self, tab):
        x = tab.points - self.mesh.barycenters[:, None, :]
        return self.offset[:, None, :] + np.einsum('kij,kqj->kqi', self.slope, x)

    def gradients_at_quadrature(self, tab):
        return np.broadcast_to(self.slope[:, None, :, :], (self.mesh.n_triangles, len(tab.rule.weights), 2, 2))

    def divergence(self):
        return self.slope[:, 0, 0] + self.slope[:, 1, 1]

    def evaluate_points(self, xs, hints=None):
        elements, bary = locate_points(self.mesh, xs, hints)
        return self.values(elements, bary), elements

    def normal_trace(self, edges, side, t):
        """(n, q) values of v . n_E at edge parameters t seen from the given side"""
        k, bary = self.mesh.edge_barycentric(edges, side, t)
        n, q = bary.shape[:2]
        vals = self.values(np.repeat(k, q), bary.reshape(-1, 3)).reshape(n, q, 2)
        return np.einsum('nqx,nx->nq', vals, self.mesh.edge_normals[edges])


def p1_stiffness(m):
    """continuous P1 stiffness matrix (NV x NV, csr)"""
    local = m.areas[:, None, None] * np.einsum('kix,kjx->kij', m.bary_grads, m.bary_grads)
    rows = np.repeat(m.triangles, 3, axis=1).ravel()
    cols = np.tile(m.triangles, (1, 3)).ravel()
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(m.n_vertices, m.n_vertices)).tocsr()


def project_rot(m, u, order=6):
    """ L2 orthogonal projection onto curls of P1 potentials vanishing on the boundary

    Solves int grad psi . grad zeta = int u . curl zeta for all P1 zeta with zero
    boundary values, curl zeta = (d zeta/dy, -d zeta/dx), and returns curl psi,
    which is constant per element.

    :raise ProjectionError: the mesh has no interior vertex
    """
    interior = np.flatnonzero(~m.boundary_vertices)
    if len(interior) == 0:
        raise ProjectionError(u'curl projection needs at least one interior vertex')

    rule = quadrature(order)
    nq = len(rule.weights)
    k = np.repeat(np.arange(m.n_triangles), nq)
    bary = np.tile(rule.points, (m.n_triangles, 1))
    vals = velocity_values(u, m, k, bary).reshape(m.n_triangles, nq, 2)
    weighted = np.einsum('kqx,q->kx', vals, rule.weights) * m.areas[:, None]

    curl_basis = np.stack([m.bary_grads[:, :, 1], -m.bary_grads[:, :, 0]], axis=2)
    local_rhs = np.einsum('kix,kx->ki', curl_basis, weighted)
    rhs = np.bincount(m.triangles.ravel(), weights=local_rhs.ravel(), minlength=m.n_vertices)

    stiffness = p1_stiffness(m)[interior][:, interior].tocsc()
    psi = np.zeros(m.n_vertices)
    try:
        psi[interior] = spla.splu(stiffness).solve(rhs[interior])
    except RuntimeError as ex:
        raise ProjectionError(u'curl potential system is singular: {0}'.format(ex))
    residual = np.linalg.norm(stiffness @ psi[interior] - rhs[interior])
    if residual > POISSON_TOL * max(np.linalg.norm(rhs[interior]), 1.0):
        raise ProjectionError(u'curl potential residual {0:.3e} above tolerance'.format(residual))

    grad = np.einsum('ki,kix->kx', psi[m.triangles], m.bary_grads)
    offset = np.stack([grad[:, 1], -grad[:, 0]], axis=1)
    return ProjectedVelocity(m, Representation.ROT, psi, offset, np.zeros((m.n_triangles, 2, 2)))


def _edge_normal_samples(m, u, points):
    """(NE, q) values of u . n_E along every edge, read from the left element, with the rule"""
    t, w = edge_quadrature(points)
    edges = np.arange(m.n_edges)
    k, bary = m.edge_barycentric(edges, 0, t)
    vals = velocity_values(u, m, np.repeat(k, len(t)), bary.reshape(-1, 3)).reshape(m.n_edges, len(t), 2)
    return np.einsum('eqx,ex->eq', vals, m.edge_normals), t, w


def project_rt0(m, u, edge_points=3, no_flux_boundary=False):
    """ lowest order Raviart-Thomas interpolant: matches int_E u . n_E on every edge

    Elementwise, so int_K div of the result equals int_K div u.
    """
    un, t, w = _edge_normal_samples(m, u, edge_points)
    flux = m.edge_lengths * (un @ w)
    if no_flux_boundary:
        flux[m.boundary_edges] = 0.0

    outward = m.tri_edge_signs * flux[m.tri_edges]
    xy = m.vertices[m.triangles]
    scale = 1.0 / (2.0 * m.areas)
    # basis of local edge i is (x - x_i) / (2|K|), x_i the opposite vertex
    offset = np.einsum('ki,kix->kx', outward, m.barycenters[:, None, :] - xy) * scale[:, None]
    slope = (outward.sum(axis=1) * scale)[:, None, None] * np.eye(2)[None, :, :]
    return ProjectedVelocity(m, Representation.RT0, flux, offset, slope)


def project_bdm(m, u, edge_points=3, no_flux_boundary=False):
    """ first order Brezzi-Douglas-Marini interpolant

    Matches the two moments int_E u.n_E and int_E u.n_E (2t - 1) on every edge,
    t running from the first to the second edge vertex.
    """
    un, t, w = _edge_normal_samples(m, u, edge_points)
    moments = np.stack([m.edge_lengths * (un @ w), m.edge_lengths * (un @ (w * (2.0 * t - 1.0)))], axis=1)
    if no_flux_boundary:
        moments[m.boundary_edges] = 0.0

    nt = m.n_triangles
    edges = m.tri_edges
    normals = m.edge_normals[edges]
    lengths = m.edge_lengths[edges]
    start = m.vertices[m.edges[edges, 0]]
    end = m.vertices[m.edges[edges, 1]]
    centre = 0.5 * (start + end) - m.barycenters[:, None, :]
    first = (end - start) / 6.0

    system = np.zeros((nt, 6, 6))
    rhs = np.zeros((nt, 6))
    for i in range(3):
        n = normals[:, i]
        row0 = np.concatenate([n, n[:, 0:1] * centre[:, i], n[:, 1:2] * centre[:, i]], axis=1)
        row1 = np.concatenate([np.zeros((nt, 2)), n[:, 0:1] * first[:, i], n[:, 1:2] * first[:, i]], axis=1)
        system[:, 2 * i] = lengths[:, i, None] * row0
        system[:, 2 * i + 1] = lengths[:, i, None] * row1
        rhs[:, 2 * i] = moments[edges[:, i], 0]
        rhs[:, 2 * i + 1] = moments[edges[:, i], 1]

    coef = np.linalg.solve(system, rhs[..., None])[..., 0]
    offset = coef[:, :2]
    slope = coef[:, 2:].reshape(nt, 2, 2)
    return ProjectedVelocity(m, Representation.BDM, moments, offset, slope)


def interpolation_error(m, projected, fn, order=6):
    """L2 distance between a projected velocity and an analytic field fn(points) -> (n, 2)"""
    rule = quadrature(order)
    nq = len(rule.weights)
    k = np.repeat(np.arange(m.n_triangles), nq)
    bary = np.tile(rule.points, (m.n_triangles, 1))
    diff = projected.values(k, bary) - np.asarray(fn(m.to_physical(k, bary)), dtype=float)
    sq = np.einsum('nx,nx->n', diff, diff).reshape(m.n_triangles, nq)
    return float(np.sqrt(np.sum(m.areas * (sq @ rule.weights))))
