#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Linearized system of one fixed point pass.

Rows are the discrete momentum, continuity, mean-pressure and stress
equations, in the unknown layout of :class:`Discretization`. The
upper-convected coupling is evaluated at the current iterate: Newton
linearization of the bilinear term for the conformation formulation,
lagged eigen data with an implicit velocity for the log formulation and
a lagged velocity gradient for the Lie formulation.
"""

import collections
import logging

import numpy as np
import scipy.sparse as sp

from ..projections import ProjectedVelocity, Representation, project_bdm, project_rot, project_rt0
from ..spaces import tabulate
from ..tensor_algebra import (IDENTITY, log_convection, spd_exp, sym_funcm, sym_funcm_frechet, upper_convected,
                              upper_convected_matrix)
from ..transport import build_edge_upwind, integrate_backward_flow, remap_cell_averages
from .config import Advection, Elements, Formulation, Projector
from .discretization import Discretization, Triplets
from .lie import lie_step_local

__all__ = ['StepContext', 'EdgeCoupling', 'advecting_velocity', 'prepare_step', 'SchemeAssembler',
           'assemble_system']

logger = logging.getLogger(__name__)

StepContext = collections.namedtuple('StepContext', ['advecting', 'momentum_velocity', 'momentum_divergence',
                                                     'momentum_edges', 'stress_edges', 'stress_time_rhs',
                                                     'remapped', 'transport_defect', 'remap_residual'])
StepContext.__doc__ = """Data frozen over one time step.

advecting: velocity transporting the stress (u^n or its projection)
momentum_velocity: (NT, nq, 2) advecting field of the momentum equation at quadrature points
momentum_divergence: (NT, nq) div u^n for the Temam term, or None
momentum_edges / stress_edges: EdgeCoupling of the upwind edge terms, or None
stress_time_rhs: (NT, nsl, 3) int (old stress) phi_i, the known part of the time derivative
remapped: (NT, 3) pi_h of the old stress transported along the characteristics, or None
transport_defect: area defect of the characteristic map (0 for DG)
remap_residual: conservation residual of the remap weights (0 for DG)
"""

EdgeCoupling = collections.namedtuple('EdgeCoupling', ['coef', 'downstream', 'upstream', 'phi_down', 'phi_up'])
EdgeCoupling.__doc__ = """coef: (ni, q) |w . n| times the edge weight; phi_*: (ni, q, nloc) basis values"""

_TEMAM_PAIRS = (Elements.TAYLOR_HOOD, Elements.P1P1_STAB, Elements.P1P0_STAB)


def _scatter(rhs, index, values):
    np.add.at(rhs, np.asarray(index).ravel(), np.asarray(values, dtype=float).ravel())


def _zero_projection(m, representation):
    return ProjectedVelocity(m, representation, None, np.zeros((m.n_triangles, 2)), np.zeros((m.n_triangles, 2, 2)))


def advecting_velocity(state, cfg, m):
    """ velocity transporting the stress: u^n itself for scott-vogelius, its projection otherwise """
    u = state.velocity
    if cfg.velocity_projector == Projector.NONE:
        return u
    representation = Representation(cfg.velocity_projector.value)
    if not np.any(u.coefficients):
        return _zero_projection(m, representation)
    if cfg.velocity_projector == Projector.ROT:
        return project_rot(m, u)
    if cfg.velocity_projector == Projector.RT0:
        return project_rt0(m, u, no_flux_boundary=True)
    return project_bdm(m, u, no_flux_boundary=True)


def _edge_coupling(m, upwind, family):
    """basis values of ``family`` on both sides of the upwind quadrature points"""
    q = len(upwind.t)
    n = len(upwind.edges)
    _, bl = m.edge_barycentric(upwind.edges, 0, upwind.t)
    _, br = m.edge_barycentric(upwind.edges, 1, upwind.t)
    phi_l = tabulate(family, bl.reshape(-1, 3))[0].reshape(n, q, -1)
    phi_r = tabulate(family, br.reshape(-1, 3))[0].reshape(n, q, -1)
    right = upwind.downstream_side[..., None] == 1
    return EdgeCoupling(coef=upwind.weights * np.abs(upwind.un), downstream=upwind.downstream,
                        upstream=upwind.upstream, phi_down=np.where(right, phi_r, phi_l),
                        phi_up=np.where(right, phi_l, phi_r))


def prepare_step(state, cfg, disc):
    """ everything of the step that does not depend on the new iterate

    :raise TransportError: characteristic feet outside the domain or folded map
    :raise ContractViolationError: the advecting velocity has a multivalued normal trace
    """
    m = disc.mesh
    advecting = advecting_velocity(state, cfg, m)
    if cfg.elements == Elements.CROUZEIX_RAVIART:
        momentum_velocity = advecting.at_quadrature(disc.vtab)
    else:
        momentum_velocity = state.velocity.at_quadrature(disc.vtab)
    momentum_divergence = None
    if cfg.elements in _TEMAM_PAIRS:
        grads = state.velocity.gradients_at_quadrature(disc.vtab)
        momentum_divergence = grads[..., 0, 0] + grads[..., 1, 1]

    upwind = None
    if cfg.advection == Advection.DG or cfg.elements == Elements.CROUZEIX_RAVIART:
        upwind = build_edge_upwind(m, advecting, cfg.edge_points)
    momentum_edges = _edge_coupling(m, upwind, cfg.velocity_family) \
        if cfg.elements == Elements.CROUZEIX_RAVIART else None
    stress_edges = _edge_coupling(m, upwind, cfg.stress_family) if cfg.advection == Advection.DG else None

    old = state.stress.coefficients
    old_bar = disc.barycenter_stress(old)
    sint = disc.stress_integrals
    remapped = None
    defect = 0.0
    remap_residual = 0.0
    if cfg.advection == Advection.CHARACTERISTIC:
        feet = integrate_backward_flow(m, advecting, m.vertices, cfg.dt, cfg.flow_substeps, hints=m.vertex_element,
                                       pinned=m.boundary_vertices)
        remapped, report = remap_cell_averages(m, feet.feet, old_bar, foot_elements=feet.elements)
        defect = report.area_defect
        remap_residual = report.balance_residual
        time_rhs = sint[:, :, None] * remapped[:, None, :]
    elif cfg.is_log:
        time_rhs = sint[:, :, None] * old_bar[:, None, :]
    else:
        time_rhs = np.einsum('kij,kjc->kic', disc.stress_mass, disc.local_stress(old))

    return StepContext(advecting=advecting, momentum_velocity=momentum_velocity,
                       momentum_divergence=momentum_divergence, momentum_edges=momentum_edges,
                       stress_edges=stress_edges, stress_time_rhs=time_rhs, remapped=remapped,
                       transport_defect=defect, remap_residual=remap_residual)


class SchemeAssembler(object):
    """ builds (matrix, rhs) of one fixed point pass

    :type disc: Discretization
    :param disc: spaces and static blocks

    :type couple_stress: bool
    :param couple_stress: include the polymeric stress in the momentum equation
    """

    def __init__(self, disc, couple_stress=True):
        self.disc = disc
        self.cfg = disc.cfg
        self.couple_stress = couple_stress
        g = np.einsum('kq,kqax->kax', disc.vtab.weights, disc.vtab.grads)
        # packed coefficients of int grad(phi_a e_c), shape (NT, 2, nv, 3)
        coupling = np.zeros((disc.mesh.n_triangles, 2, g.shape[1], 3))
        coupling[:, 0, :, 0] = g[..., 0]
        coupling[:, 0, :, 1] = g[..., 1]
        coupling[:, 1, :, 1] = g[..., 0]
        coupling[:, 1, :, 2] = g[..., 1]
        self._coupling = coupling
        # e_c (x) int phi_i grad(phi_a), shape (NT, nsl, nv, 2, 2, 2)
        gi = disc.gradient_integrals
        basis = np.zeros(gi.shape[:3] + (2, 2, 2))
        basis[..., 0, 0, :] = gi
        basis[..., 1, 1, :] = gi
        self._gradient_basis = basis

    def assemble(self, state, context, iterate):
        disc = self.disc
        trip = Triplets()
        rhs = np.zeros(disc.size)
        u_k, _, _, s_k = disc.split(iterate)

        self._momentum(trip, rhs, state, context)
        self._incompressibility(trip)
        if self.cfg.formulation == Formulation.LIE:
            self._lie_stress(trip, rhs, context, u_k)
        else:
            self._stress_time(trip, rhs, context)
            if self.cfg.is_log:
                self._log_stress(trip, rhs, s_k)
            else:
                self._conformation_stress(trip, rhs, u_k, s_k)
        if self.couple_stress:
            self._stress_in_momentum(trip, rhs, s_k)
        return self._constrain(trip.tocsr(disc.size), rhs, state)

    def _momentum(self, trip, rhs, state, context):
        disc = self.disc
        cfg = self.cfg
        re = cfg.params.re
        tab = disc.vtab
        local = (re / cfg.dt) * disc.velocity_mass + (1.0 - cfg.params.eps) * disc.velocity_stiffness
        if re > 0.0:
            local = local + re * np.einsum('kq,qa,kqx,kqbx->kab', tab.weights, tab.values,
                                           context.momentum_velocity, tab.grads)
            if context.momentum_divergence is not None:
                local = local + 0.5 * re * np.einsum('kq,kq,qa,qb->kab', tab.weights, context.momentum_divergence,
                                                     tab.values, tab.values)
        for c in (0, 1):
            idx = disc.u_index[:, c]
            trip.add(idx[:, :, None], idx[:, None, :], local)
            previous = state.velocity.coefficients[disc.vdofs.cell_dofs, c]
            _scatter(rhs, idx, (re / cfg.dt) * np.einsum('kab,kb->ka', disc.velocity_mass, previous))

        edges = context.momentum_edges
        if edges is not None and re > 0.0:
            # Re |w.n| [u] . {v}, [u] = downstream - upstream
            a = 0.5 * re * edges.coef[..., None, None]
            pd, pu = edges.phi_down, edges.phi_up
            for c in (0, 1):
                di = disc.u_index[edges.downstream, c]
                ui = disc.u_index[edges.upstream, c]
                trip.add(di[..., :, None], di[..., None, :], a * pd[..., :, None] * pd[..., None, :])
                trip.add(di[..., :, None], ui[..., None, :], -a * pd[..., :, None] * pu[..., None, :])
                trip.add(ui[..., :, None], di[..., None, :], a * pu[..., :, None] * pd[..., None, :])
                trip.add(ui[..., :, None], ui[..., None, :], -a * pu[..., :, None] * pu[..., None, :])

    def _incompressibility(self, trip):
        disc = self.disc
        div = disc.divergence
        for c in (0, 1):
            ui = disc.u_index[:, c]
            trip.add(disc.p_index[:, :, None], ui[:, None, :], div[:, c])
            trip.add(ui[:, :, None], disc.p_index[:, None, :], -np.swapaxes(div[:, c], 1, 2))
        pressure = disc.p_offset + np.arange(disc.np)
        trip.add(pressure, disc.mult_index, disc.pressure_mean)
        trip.add(disc.mult_index, pressure, disc.pressure_mean)
        stabilization = disc.pressure_stabilization()
        if stabilization is not None:
            trip.add(*stabilization)

    def _stress_in_momentum(self, trip, rhs, s_k):
        disc = self.disc
        params = self.cfg.params
        factor = params.eps / params.wi
        beta = disc.barycenter_weights[None, None, None, :, None]
        rows = disc.u_index[:, :, :, None, None]
        cols = disc.s_index[:, None, None, :, :]
        if not self.cfg.is_log:
            trip.add(rows, cols, factor * self._coupling[:, :, :, None, :] * beta)
            return
        # e^{pi_h psi} ~ E + J (pi_h psi - pi_h psi^k)
        pi = disc.barycenter_stress(s_k)
        jac = sym_funcm_frechet(pi, np.exp, np.exp)
        linear = np.einsum('kcam,kmn->kcan', self._coupling, jac)
        trip.add(rows, cols, factor * linear[:, :, :, None, :] * beta)
        constant = spd_exp(pi) - np.einsum('kmn,kn->km', jac, pi)
        _scatter(rhs, disc.u_index, -factor * np.einsum('kcam,km->kca', self._coupling, constant))

    def _stress_time(self, trip, rhs, context):
        disc = self.disc
        dt = self.cfg.dt
        block = disc.stress_mass[:, :, :, None]
        trip.add(disc.s_index[:, :, None, :], disc.s_index[:, None, :, :], block / dt)
        _scatter(rhs, disc.s_index, context.stress_time_rhs / dt)

        edges = context.stress_edges
        if edges is None:
            return
        # |w.n| [pi_h s] : phi on the downstream side
        weights = edges.coef[..., None, None] * edges.phi_down[..., :, None] * disc.barycenter_weights
        rows = disc.s_index[edges.downstream][..., :, None, :]
        trip.add(rows, disc.s_index[edges.downstream][..., None, :, :], weights[..., None])
        trip.add(rows, disc.s_index[edges.upstream][..., None, :, :], -weights[..., None])

    def _conformation_stress(self, trip, rhs, u_k, s_k):
        disc = self.disc
        cfg = self.cfg
        wi = cfg.params.wi
        sint = disc.stress_integrals
        rows = disc.s_index[:, :, None, :]
        trip.add(rows, disc.s_index[:, None, :, :], disc.stress_mass[:, :, :, None] / wi)
        _scatter(rhs, disc.s_index, sint[:, :, None] * IDENTITY / wi)

        # -(grad u s + s grad u^T) linearized around (u^k, pi_h s^k)
        pi = disc.barycenter_stress(s_k)
        gbar = np.einsum('kiax,kac->kicx', disc.gradient_integrals, u_k[disc.vdofs.cell_dofs])
        lmat = upper_convected_matrix(gbar)
        trip.add(disc.s_index[:, :, :, None, None], disc.s_index[:, None, None, :, :],
                 -lmat[:, :, :, None, :] * disc.barycenter_weights[None, None, None, :, None])
        velocity_part = upper_convected(self._gradient_basis, pi[:, None, None, None, :])
        trip.add(disc.s_index[:, :, None, None, :], np.swapaxes(disc.u_index, 1, 2)[:, None, :, :, None],
                 -velocity_part)
        _scatter(rhs, disc.s_index, -upper_convected(gbar, pi[:, None, :]))

    def _log_stress(self, trip, rhs, s_k):
        disc = self.disc
        cfg = self.cfg
        wi = cfg.params.wi
        sint = disc.stress_integrals
        beta = disc.barycenter_weights

        # -(Omega psi - psi Omega + 2B), linear in grad u with eigen data of pi_h psi^k
        pi = disc.barycenter_stress(s_k)
        rotation = log_convection(self._gradient_basis, pi[:, None, None, None, :], cfg.degeneracy_tol)
        trip.add(disc.s_index[:, :, None, None, :], np.swapaxes(disc.u_index, 1, 2)[:, None, :, :, None],
                 -rotation)

        # -(1/Wi)(e^{-pi_h psi} - I), linearized at pi_h psi^k
        value = sym_funcm(pi, lambda x: np.exp(-x))
        jac = sym_funcm_frechet(pi, lambda x: np.exp(-x), lambda x: -np.exp(-x))
        vals = -(sint[:, :, None, None, None] / wi) * beta[None, None, None, :, None] * jac[:, None, :, None, :]
        trip.add(disc.s_index[:, :, :, None, None], disc.s_index[:, None, None, :, :], vals)
        constant = value - np.einsum('kmn,kn->km', jac, pi) - IDENTITY
        _scatter(rhs, disc.s_index, (sint[:, :, None] / wi) * constant[:, None, :])

    def _lie_stress(self, trip, rhs, context, u_k):
        disc = self.disc
        cfg = self.cfg
        coef = disc.mesh.areas * (1.0 / cfg.dt + 1.0 / cfg.params.wi)
        g = disc.velocity_gradient_at_barycenters(u_k)
        target = lie_step_local(context.remapped, g, cfg.dt, cfg.params.wi)
        rows = disc.s_index[:, 0, :]
        trip.add(rows, rows, np.broadcast_to(coef[:, None], rows.shape))
        _scatter(rhs, rows, coef[:, None] * target)

    def _constrain(self, matrix, rhs, state):
        """identity rows with zeroed columns for no-slip (and, in frozen mode, all flow) unknowns"""
        disc = self.disc
        fixed = np.zeros(disc.size, dtype=bool)
        values = np.zeros(disc.size)
        fixed[disc.boundary_unknowns] = True
        if self.cfg.freeze_velocity:
            fixed[:disc.s_offset] = True
            values[:disc.s_offset] = disc.pack(state)[:disc.s_offset]
        rhs = rhs - matrix @ values
        rhs[fixed] = values[fixed]
        keep = sp.diags((~fixed).astype(float))
        matrix = (keep @ matrix @ keep + sp.diags(fixed.astype(float))).tocsr()
        return matrix, rhs


def assemble_system(state, cfg, m, current_iterate, context=None, disc=None):
    """ linearized system of one fixed point pass

    :type current_iterate: numpy.ndarray
    :param current_iterate: unknown vector the coupling terms are linearized around

    :return: (scipy.sparse.csr_matrix, numpy.ndarray)
    """
    disc = disc or Discretization(m, cfg)
    context = context or prepare_step(state, cfg, disc)
    return SchemeAssembler(disc).assemble(state, context, current_iterate)
