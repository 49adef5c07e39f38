#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Unknown layout and the time independent element blocks of a scheme.

Global unknown vector::

    [ u_x (nu) | u_y (nu) | p (np) | mean multiplier (1) | stress (3 ns, dof-major) ]
"""

import logging

import numpy as np
import scipy.sparse as sp

from ..exceptions import ConfigError
from ..quadrature import quadrature
from ..spaces import Family, FEField, SpaceSpec, SymTensorField, Tabulation, build_dof_map
from .config import Elements
from .state import State, VelocityPressureState

__all__ = ['Discretization', 'Triplets']

logger = logging.getLogger(__name__)


class Triplets(object):
    """accumulate (row, col, value) blocks; repeated entries are summed"""

    def __init__(self):
        self.rows = []
        self.cols = []
        self.vals = []

    def add(self, rows, cols, vals):
        rows, cols, vals = np.broadcast_arrays(rows, cols, vals)
        self.rows.append(rows.ravel())
        self.cols.append(cols.ravel())
        self.vals.append(vals.ravel().astype(float))

    def tocsr(self, n):
        if not self.rows:
            return sp.csr_matrix((n, n))
        return sp.coo_matrix((np.concatenate(self.vals), (np.concatenate(self.rows), np.concatenate(self.cols))),
                             shape=(n, n)).tocsr()


class Discretization(object):
    """ Spaces, numbering and static blocks for one (mesh, SchemeConfig) pair.

    :type m: Mesh
    :param m: mesh; barycentric-refined for scott-vogelius

    :type cfg: SchemeConfig
    :param cfg: validated scheme options
    """

    def __init__(self, m, cfg):
        cfg.validate()
        if cfg.elements == Elements.SCOTT_VOGELIUS and not m.is_macro_refined:
            raise ConfigError(settings='mesh.refine', msg=u'scott-vogelius elements need a barycentric-refined mesh')
        self.mesh = m
        self.cfg = cfg
        self.velocity_spec = SpaceSpec(cfg.velocity_family, 2)
        self.pressure_spec = SpaceSpec(cfg.pressure_family, 1)
        self.stress_spec = SpaceSpec(cfg.stress_family, 3)
        self.vdofs = build_dof_map(m, self.velocity_spec)
        self.pdofs = build_dof_map(m, self.pressure_spec)
        self.sdofs = build_dof_map(m, self.stress_spec)

        self.nu = self.vdofs.n_dofs
        self.np = self.pdofs.n_dofs
        self.ns = self.sdofs.n_dofs
        self.p_offset = 2 * self.nu
        self.mult_index = self.p_offset + self.np
        self.s_offset = self.mult_index + 1
        self.size = self.s_offset + 3 * self.ns

        self.rule = quadrature(cfg.quadrature_order)
        self.vtab = Tabulation(m, cfg.velocity_family, self.rule)
        self.ptab = Tabulation(m, cfg.pressure_family, self.rule)
        self.stab = Tabulation(m, cfg.stress_family, self.rule)

        self.u_index = np.stack([c * self.nu + self.vdofs.cell_dofs for c in (0, 1)], axis=1)
        self.p_index = self.p_offset + self.pdofs.cell_dofs
        self.s_index = self.s_offset + 3 * self.sdofs.cell_dofs[:, :, None] + np.arange(3)[None, None, :]
        bnd = np.flatnonzero(self.vdofs.boundary)
        self.boundary_unknowns = np.concatenate([bnd, self.nu + bnd])
        # pi_h weights of the local stress dofs
        self.barycenter_weights = np.full(self.stab.values.shape[1], 1.0 / self.stab.values.shape[1])
        self._cache = {}

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def velocity_mass(self):
        """(NT, nv, nv) local scalar mass matrices"""
        return self._cached('vmass', lambda: np.einsum('kq,qa,qb->kab', self.vtab.weights, self.vtab.values,
                                                       self.vtab.values))

    @property
    def velocity_stiffness(self):
        return self._cached('vstiff', lambda: np.einsum('kq,kqax,kqbx->kab', self.vtab.weights, self.vtab.grads,
                                                        self.vtab.grads))

    @property
    def divergence(self):
        """(NT, 2, npl, nv): int psi_i d(phi_a)/dx_c"""
        return self._cached('div', lambda: np.einsum('kq,qi,kqax->kxia', self.vtab.weights, self.ptab.values,
                                                     self.vtab.grads))

    @property
    def pressure_mean(self):
        """(np,) integrals of the pressure basis functions"""
        def build():
            local = np.einsum('kq,qi->ki', self.ptab.weights, self.ptab.values)
            return np.bincount(self.pdofs.cell_dofs.ravel(), weights=local.ravel(), minlength=self.np)
        return self._cached('pmean', build)

    @property
    def stress_mass(self):
        """(NT, nsl, nsl) local scalar mass matrices of the stress space"""
        return self._cached('smass', lambda: np.einsum('kq,qi,qj->kij', self.stab.weights, self.stab.values,
                                                       self.stab.values))

    @property
    def stress_integrals(self):
        """(NT, nsl) integrals of the stress basis functions"""
        return self._cached('sint', lambda: np.einsum('kq,qi->ki', self.stab.weights, self.stab.values))

    @property
    def gradient_integrals(self):
        """(NT, nsl, nv, 2): int phi_i grad(phi_a) with phi_i a stress basis function"""
        return self._cached('gint', lambda: np.einsum('kq,qi,kqax->kiax', self.stab.weights, self.stab.values,
                                                      self.vtab.grads))

    def global_velocity_matrix(self, local):
        """assemble a scalar local block on both velocity components (2nu x 2nu)"""
        trip = Triplets()
        for c in (0, 1):
            idx = self.u_index[:, c]
            trip.add(idx[:, :, None], idx[:, None, :], local)
        return trip.tocsr(2 * self.nu)

    @property
    def global_velocity_mass(self):
        return self._cached('gvmass', lambda: self.global_velocity_matrix(self.velocity_mass))

    @property
    def global_velocity_stiffness(self):
        return self._cached('gvstiff', lambda: self.global_velocity_matrix(self.velocity_stiffness))

    def pressure_stabilization(self):
        """ local (rows, cols, vals) of the pressure stabilization, or None

        p1p1-stab: sum_K h_K^2 int_K grad p . grad q
        p1p0-stab: sum_E |E| int_E [p][q]
        """
        cfg = self.cfg
        if not cfg.pressure_stabilization:
            return None
        m = self.mesh
        if cfg.elements == Elements.P1P1_STAB:
            local = (m.diameters ** 2)[:, None, None] * np.einsum('kq,kqix,kqjx->kij', self.ptab.weights,
                                                                  self.ptab.grads, self.ptab.grads)
            return self.p_index[:, :, None], self.p_index[:, None, :], local
        if cfg.elements == Elements.P1P0_STAB:
            edges = m.internal_edges
            pair = self.p_offset + self.pdofs.cell_dofs[m.edge_elements[edges], 0]
            weight = m.edge_lengths[edges] ** 2
            sign = np.array([[1.0, -1.0], [-1.0, 1.0]])
            return pair[:, :, None], pair[:, None, :], weight[:, None, None] * sign[None]
        return None

    def zero_vector(self):
        return np.zeros(self.size)

    def pack(self, state):
        x = np.zeros(self.size)
        x[:self.nu] = state.velocity.coefficients[:, 0]
        x[self.nu:2 * self.nu] = state.velocity.coefficients[:, 1]
        x[self.p_offset:self.mult_index] = state.pressure.coefficients[:, 0]
        x[self.s_offset:] = state.stress.coefficients.ravel()
        return x

    def split(self, x):
        """views (u (nu, 2), p (np,), multiplier, stress (ns, 3)) of an unknown vector"""
        u = np.stack([x[:self.nu], x[self.nu:2 * self.nu]], axis=1)
        return u, x[self.p_offset:self.mult_index], x[self.mult_index], x[self.s_offset:].reshape(self.ns, 3)

    def velocity_field(self, coefficients):
        return FEField(self.mesh, self.velocity_spec, coefficients, self.vdofs)

    def pressure_field(self, coefficients):
        return FEField(self.mesh, self.pressure_spec, np.asarray(coefficients).reshape(-1, 1), self.pdofs)

    def stress_field(self, coefficients):
        return SymTensorField(self.mesh, self.stress_spec, coefficients, self.sdofs)

    def unpack(self, x, n):
        u, p, _, s = self.split(x)
        flow = VelocityPressureState(self.velocity_field(u.copy()), self.pressure_field(p.copy()))
        return State(flow, self.stress_field(s.copy()), n)

    def local_stress(self, s):
        """(NT, nsl, 3) local stress values from (ns, 3) coefficients"""
        return s[self.sdofs.cell_dofs]

    def barycenter_stress(self, s):
        """(NT, 3) pi_h of stress coefficients (ns, 3)"""
        return np.einsum('i,kic->kc', self.barycenter_weights, self.local_stress(s))

    def velocity_gradient_at_barycenters(self, u):
        field = self.velocity_field(u)
        return field.element_gradients(np.array([[1.0, 1.0, 1.0]]) / 3.0)[:, 0]

    def is_p0_stress(self):
        return self.cfg.stress_family == Family.P0
