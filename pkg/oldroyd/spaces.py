#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Finite element spaces, degrees of freedom and the barycenter interpolation pi_h."""

import collections
import logging
from enum import Enum

import numpy as np

from .mesh import locate_points
from .quadrature import quadrature

__all__ = ['Family', 'Anchor', 'SpaceSpec', 'DofMap', 'Tabulation', 'FEField', 'SymTensorField',
           'P2_VECTOR', 'P1_SCALAR', 'P1DISC_SCALAR', 'P0_SCALAR', 'P1CR_VECTOR', 'P1PLUSP0_TENSOR',
           'P1DISC_TENSOR', 'P0_TENSOR', 'space_from_name', 'build_dof_map', 'tabulate', 'eval_basis',
           'interpolate', 'pi_h', 'to_p1disc', 'constant_tensor_field']

logger = logging.getLogger(__name__)


class Family(Enum):
    P2 = 'P2'
    P1 = 'P1'
    P1DISC = 'P1disc'
    P0 = 'P0'
    P1CR = 'P1CR'
    P1PLUSP0 = 'P1plusP0'


class Anchor(Enum):
    VERTEX = 'vertex'
    EDGE = 'edge'
    ELEMENT = 'element'
    ELEMENT_VERTEX = 'element-vertex'


LOCAL_SIZE = {
    Family.P2: 6,
    Family.P1: 3,
    Family.P1DISC: 3,
    Family.P0: 1,
    Family.P1CR: 3,
    Family.P1PLUSP0: 4,
}

LAGRANGE_FAMILIES = (Family.P2, Family.P1, Family.P1DISC, Family.P0)

SpaceSpec = collections.namedtuple('SpaceSpec', ['family', 'components'])

P2_VECTOR = SpaceSpec(Family.P2, 2)
P1_SCALAR = SpaceSpec(Family.P1, 1)
P1DISC_SCALAR = SpaceSpec(Family.P1DISC, 1)
P0_SCALAR = SpaceSpec(Family.P0, 1)
P1CR_VECTOR = SpaceSpec(Family.P1CR, 2)
P1PLUSP0_TENSOR = SpaceSpec(Family.P1PLUSP0, 3)
P1DISC_TENSOR = SpaceSpec(Family.P1DISC, 3)
P0_TENSOR = SpaceSpec(Family.P0, 3)

_NAMED = {
    'P2-vector': P2_VECTOR,
    'P1': P1_SCALAR,
    'P1disc': P1DISC_SCALAR,
    'P0': P0_SCALAR,
    'P1CR-vector': P1CR_VECTOR,
    'P1plusP0-tensor': P1PLUSP0_TENSOR,
    'P1disc-tensor': P1DISC_TENSOR,
    'P0-tensor': P0_TENSOR,
}


def space_from_name(name):
    try:
        return _NAMED[name]
    except KeyError:
        raise ValueError(u'unknown space "{0}", expected one of {1}'.format(name, sorted(_NAMED)))


DofMap = collections.namedtuple('DofMap', ['cell_dofs', 'n_dofs', 'anchor_kind', 'anchor_index',
                                           'anchor_points', 'boundary'])
DofMap.__doc__ = """Local to global numbering of one scalar component.

cell_dofs: (NT, nloc) global index of every local basis function
anchor_kind: (n_dofs,) Anchor value names
anchor_index: (n_dofs,) vertex, edge or element index the dof is attached to
anchor_points: (n_dofs, 2) nodal point of the dof
boundary: (n_dofs,) True for dofs located on the boundary
"""


def build_dof_map(m, spec):
    """ number the degrees of freedom of one scalar component of ``spec`` on mesh ``m``

    :return: DofMap
    """
    family = spec.family if isinstance(spec, SpaceSpec) else spec
    nv, ne, nt = m.n_vertices, m.n_edges, m.n_triangles
    elements = np.arange(nt)

    if family == Family.P1:
        cell_dofs = m.triangles.copy()
        kinds = [Anchor.VERTEX.value] * nv
        index = np.arange(nv)
        points = m.vertices.copy()
        boundary = m.boundary_vertices.copy()
    elif family == Family.P2:
        cell_dofs = np.concatenate([m.triangles, nv + m.tri_edges], axis=1)
        kinds = [Anchor.VERTEX.value] * nv + [Anchor.EDGE.value] * ne
        index = np.concatenate([np.arange(nv), np.arange(ne)])
        points = np.concatenate([m.vertices, m.edge_midpoints])
        boundary = np.concatenate([m.boundary_vertices, m.boundary_edges])
    elif family == Family.P1CR:
        cell_dofs = m.tri_edges.copy()
        kinds = [Anchor.EDGE.value] * ne
        index = np.arange(ne)
        points = m.edge_midpoints.copy()
        boundary = m.boundary_edges.copy()
    elif family == Family.P0:
        cell_dofs = elements[:, None].copy()
        kinds = [Anchor.ELEMENT.value] * nt
        index = elements.copy()
        points = m.barycenters.copy()
        boundary = np.zeros(nt, dtype=bool)
    elif family == Family.P1DISC:
        cell_dofs = np.arange(3 * nt).reshape(nt, 3)
        kinds = [Anchor.ELEMENT_VERTEX.value] * (3 * nt)
        index = np.repeat(elements, 3)
        points = m.vertices[m.triangles].reshape(-1, 2)
        boundary = np.zeros(3 * nt, dtype=bool)
    elif family == Family.P1PLUSP0:
        cell_dofs = np.concatenate([m.triangles, nv + elements[:, None]], axis=1)
        kinds = [Anchor.VERTEX.value] * nv + [Anchor.ELEMENT.value] * nt
        index = np.concatenate([np.arange(nv), elements])
        points = np.concatenate([m.vertices, m.barycenters])
        boundary = np.concatenate([m.boundary_vertices, np.zeros(nt, dtype=bool)])
    else:
        raise ValueError(u'unknown finite element family {0}'.format(family))

    return DofMap(cell_dofs=cell_dofs, n_dofs=len(points), anchor_kind=np.array(kinds),
                  anchor_index=index, anchor_points=points, boundary=boundary)


def tabulate(family, bary):
    """ reference basis values and derivatives with respect to the barycentric coordinates

    :type bary: array_like
    :param bary: (nq, 3) barycentric points

    :return: (values (nq, nloc), dlam (nq, nloc, 3))
    """
    lam = np.atleast_2d(np.asarray(bary, dtype=float))
    nq = len(lam)
    nloc = LOCAL_SIZE[family]
    values = np.zeros((nq, nloc))
    dlam = np.zeros((nq, nloc, 3))
    eye = np.eye(3)

    if family == Family.P0:
        values[:, 0] = 1.0
    elif family in (Family.P1, Family.P1DISC):
        values[:] = lam
        dlam[:] = eye
    elif family == Family.P1PLUSP0:
        values[:, :3] = lam
        values[:, 3] = 1.0
        dlam[:, :3] = eye
    elif family == Family.P1CR:
        values[:] = 1.0 - 2.0 * lam
        dlam[:] = -2.0 * eye
    elif family == Family.P2:
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            values[:, i] = lam[:, i] * (2.0 * lam[:, i] - 1.0)
            dlam[:, i, i] = 4.0 * lam[:, i] - 1.0
            values[:, 3 + i] = 4.0 * lam[:, j] * lam[:, k]
            dlam[:, 3 + i, j] = 4.0 * lam[:, k]
            dlam[:, 3 + i, k] = 4.0 * lam[:, j]
    else:
        raise ValueError(u'unknown finite element family {0}'.format(family))
    return values, dlam


def eval_basis(spec, m, k, x_ref):
    """ shape functions of element k at barycentric point x_ref

    :return: (values (nloc,), reference gradients (nloc, 3) w.r.t. the barycentric
        coordinates); physical gradients are ``ref @ m.bary_grads[k]``
    """
    family = spec.family if isinstance(spec, SpaceSpec) else spec
    values, dlam = tabulate(family, np.asarray(x_ref, dtype=float)[None, :])
    return values[0], dlam[0]


class Tabulation(object):
    """ basis values and physical gradients of one family at the points of a triangle rule

    :type m: Mesh
    :param m: mesh

    :type family: Family
    :param family: element family

    :type rule: QuadratureRule
    :param rule: triangle quadrature rule
    """

    def __init__(self, m, family, rule):
        self.mesh = m
        self.family = family
        self.rule = rule
        self.values, self.dlam = tabulate(family, rule.points)
        self.weights = m.areas[:, None] * rule.weights[None, :]
        self._grads = None

    @property
    def grads(self):
        """(NT, nq, nloc, 2) physical gradients"""
        if self._grads is None:
            self._grads = np.einsum('qai,kix->kqax', self.dlam, self.mesh.bary_grads)
        return self._grads

    @property
    def points(self):
        """(NT, nq, 2) physical quadrature points"""
        return np.einsum('qi,kix->kqx', self.rule.points, self.mesh.vertices[self.mesh.triangles])


class FEField(object):
    """ finite element function: coefficients (n_dofs, components) on a DofMap """

    def __init__(self, m, spec, coefficients, dofmap=None):
        self.mesh = m
        self.spec = spec
        self.dofmap = dofmap if dofmap is not None else build_dof_map(m, spec)
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.ndim == 1:
            coefficients = coefficients[:, None]
        if coefficients.shape != (self.dofmap.n_dofs, spec.components):
            raise ValueError(u'expected coefficients of shape {0}, got {1}'.format(
                (self.dofmap.n_dofs, spec.components), coefficients.shape))
        self.coefficients = coefficients

    @classmethod
    def zeros(cls, m, spec, dofmap=None):
        dofmap = dofmap if dofmap is not None else build_dof_map(m, spec)
        return cls(m, spec, np.zeros((dofmap.n_dofs, spec.components)), dofmap)

    @property
    def family(self):
        return self.spec.family

    def copy(self, coefficients=None):
        coefficients = self.coefficients.copy() if coefficients is None else coefficients
        return type(self)(self.mesh, self.spec, coefficients, self.dofmap)

    def values(self, k, bary):
        """ values at points given by element indices k (n,) and barycentric coordinates (n, 3)

        :return: (n, components)
        """
        k = np.atleast_1d(k)
        phi, _ = tabulate(self.family, bary)
        coefs = self.coefficients[self.dofmap.cell_dofs[k]]
        return np.einsum('na,nac->nc', phi, coefs)

    def gradients(self, k, bary):
        """(n, components, 2) gradients at (element, barycentric) points"""
        k = np.atleast_1d(k)
        _, dlam = tabulate(self.family, bary)
        grads = np.einsum('nai,nix->nax', dlam, self.mesh.bary_grads[k])
        coefs = self.coefficients[self.dofmap.cell_dofs[k]]
        return np.einsum('nax,nac->ncx', grads, coefs)

    def at_quadrature(self, tab):
        """(NT, nq, components) values at the points of a Tabulation of this family"""
        return np.einsum('qa,kac->kqc', tab.values, self.coefficients[self.dofmap.cell_dofs])

    def gradients_at_quadrature(self, tab):
        """(NT, nq, components, 2)"""
        return np.einsum('kqax,kac->kqcx', tab.grads, self.coefficients[self.dofmap.cell_dofs])

    def element_values(self, bary):
        """(NT, nb, components) values at the same barycentric points in every element"""
        phi, _ = tabulate(self.family, bary)
        return np.einsum('qa,kac->kqc', phi, self.coefficients[self.dofmap.cell_dofs])

    def element_gradients(self, bary):
        _, dlam = tabulate(self.family, bary)
        grads = np.einsum('qai,kix->kqax', dlam, self.mesh.bary_grads)
        return np.einsum('kqax,kac->kqcx', grads, self.coefficients[self.dofmap.cell_dofs])

    def evaluate_points(self, xs, hints=None):
        """ values at physical points; returns (values (n, components), elements (n,)) """
        elements, bary = locate_points(self.mesh, xs, hints)
        return self.values(elements, bary), elements

    def vertex_values(self):
        """(NV, components) values sampled at the mesh vertices"""
        m = self.mesh
        k = m.vertex_element
        bary = (m.triangles[k] == np.arange(m.n_vertices)[:, None]).astype(float)
        return self.values(k, bary)


class SymTensorField(FEField):
    """ symmetric tensor field, three packed components (a11, a12, a22) per dof """

    def __init__(self, m, spec, coefficients, dofmap=None):
        if spec.components != 3:
            raise ValueError(u'tensor fields carry 3 packed components')
        super(SymTensorField, self).__init__(m, spec, coefficients, dofmap)

    def element_nodal(self):
        """(NT, 3, 3) per element vertex values (P1disc layout); P0 values are repeated"""
        if self.family == Family.P0:
            return np.repeat(self.coefficients[:, None, :], 3, axis=1)
        return to_p1disc(self).coefficients.reshape(self.mesh.n_triangles, 3, 3)

    def barycenter_values(self):
        """(NT, 3) values at the barycenters, i.e. the coefficients of pi_h"""
        return pi_h(self).coefficients


def interpolate(spec, m, fn, dofmap=None):
    """ nodal interpolation of fn: (n, 2) -> (n, components) """
    dofmap = dofmap if dofmap is not None else build_dof_map(m, spec)
    field_type = SymTensorField if spec.components == 3 and spec.family in (
        Family.P0, Family.P1DISC, Family.P1PLUSP0) else FEField

    if spec.family == Family.P1PLUSP0:
        values = np.zeros((dofmap.n_dofs, spec.components))
        values[:m.n_vertices] = np.asarray(fn(m.vertices), dtype=float).reshape(m.n_vertices, -1)
    else:
        values = np.asarray(fn(dofmap.anchor_points), dtype=float).reshape(dofmap.n_dofs, -1)
    return field_type(m, spec, values, dofmap)


def constant_tensor_field(m, spec, value):
    value = np.asarray(value, dtype=float)
    return interpolate(spec, m, lambda x: np.tile(value, (len(x), 1)))


def to_p1disc(f):
    """express a P1plusP0 (or P1disc) tensor field in P1disc storage"""
    m = f.mesh
    if f.family == Family.P1DISC:
        return f
    if f.family == Family.P1PLUSP0:
        nodal = f.coefficients[m.triangles] + f.coefficients[m.n_vertices + np.arange(m.n_triangles)][:, None, :]
        return SymTensorField(m, P1DISC_TENSOR, nodal.reshape(-1, 3))
    if f.family == Family.P0:
        return SymTensorField(m, P1DISC_TENSOR, np.repeat(f.coefficients, 3, axis=0))
    raise ValueError(u'cannot express {0} in P1disc'.format(f.family))


def pi_h(f):
    """ barycenter interpolation onto piecewise constants

    pi_h f |_K = f(theta_K). For P1disc data this is the mean of the three nodal
    values, which is also the L2 projection onto P0.
    """
    m = f.mesh
    if f.family == Family.P0:
        return SymTensorField(m, P0_TENSOR, f.coefficients.copy(), f.dofmap)
    if f.family in (Family.P1DISC, Family.P1PLUSP0):
        nodal = to_p1disc(f).coefficients.reshape(m.n_triangles, 3, -1)
        return SymTensorField(m, P0_TENSOR, nodal.mean(axis=1))
    raise ValueError(u'pi_h expects a P0, P1disc or P1plusP0 tensor field, got {0}'.format(f.family))


def default_tabulation(m, family, order=6):
    return Tabulation(m, family, quadrature(order))
