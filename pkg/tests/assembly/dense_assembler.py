#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Element by element dense assembly, used as a reference for SchemeAssembler.

Only P0 stress is supported; every integral is summed point by point.
"""

import numpy as np

from oldroyd.quadrature import edge_quadrature
from oldroyd.schemes.config import Advection, Elements
from oldroyd.spaces import tabulate
from oldroyd.tensor_algebra import (IDENTITY, log_convection, spd_exp, sym_funcm, sym_funcm_frechet,
                                    upper_convected, upper_convected_matrix)

# packed position of the (row, col) entry of a symmetric matrix
PACKED = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 2}


class DenseAssembler(object):

    def __init__(self, disc):
        if not disc.is_p0_stress():
            raise ValueError('the dense reference only handles P0 stress')
        self.disc = disc
        self.cfg = disc.cfg
        self.m = disc.mesh

    def _element(self, k):
        disc = self.disc
        rule = disc.rule
        weights = self.m.areas[k] * rule.weights
        phi, dphi = tabulate(self.cfg.velocity_family, rule.points)
        grads = dphi @ self.m.bary_grads[k]
        psi, _ = tabulate(self.cfg.pressure_family, rule.points)
        return weights, phi, grads, psi

    def _u(self, c, dof):
        return c * self.disc.nu + dof

    def _s(self, k, comp):
        return self.disc.s_offset + 3 * self.disc.sdofs.cell_dofs[k, 0] + comp

    def assemble(self, state, iterate, remapped=None):
        disc = self.disc
        cfg = self.cfg
        m = self.m
        p = cfg.params
        a = np.zeros((disc.size, disc.size))
        b = np.zeros(disc.size)
        u_old = state.velocity.coefficients
        u_k, _, _, s_k = disc.split(iterate)
        old = state.stress.coefficients

        for k in range(m.n_triangles):
            weights, phi, grads, psi = self._element(k)
            vd = disc.vdofs.cell_dofs[k]
            pd = disc.pdofs.cell_dofs[k]
            nv = len(vd)
            w = phi @ u_old[vd]
            div_old = grads[:, :, 0] @ u_old[vd, 0] + grads[:, :, 1] @ u_old[vd, 1]
            integral_grad = np.einsum('q,qax->ax', weights, grads)

            # momentum
            for i in range(nv):
                for j in range(nv):
                    val = 0.0
                    for q in range(len(weights)):
                        val += p.re / cfg.dt * weights[q] * phi[q, i] * phi[q, j]
                        val += (1.0 - p.eps) * weights[q] * grads[q, i] @ grads[q, j]
                        if p.re > 0.0:
                            val += p.re * weights[q] * phi[q, i] * (w[q] @ grads[q, j])
                            if cfg.elements in (Elements.TAYLOR_HOOD, Elements.P1P1_STAB, Elements.P1P0_STAB):
                                val += 0.5 * p.re * weights[q] * div_old[q] * phi[q, i] * phi[q, j]
                    mass = float(np.sum(weights * phi[:, i] * phi[:, j]))
                    for c in (0, 1):
                        a[self._u(c, vd[i]), self._u(c, vd[j])] += val
                        b[self._u(c, vd[i])] += p.re / cfg.dt * mass * u_old[vd[j], c]

            # continuity and mean pressure
            for i in range(len(pd)):
                row = disc.p_offset + pd[i]
                for j in range(nv):
                    for c in (0, 1):
                        val = float(np.sum(weights * psi[:, i] * grads[:, j, c]))
                        a[row, self._u(c, vd[j])] += val
                        a[self._u(c, vd[j]), row] -= val
                mean = float(np.sum(weights * psi[:, i]))
                a[row, disc.mult_index] += mean
                a[disc.mult_index, row] += mean

            # stress in momentum
            factor = p.eps / p.wi
            pi = s_k[disc.sdofs.cell_dofs[k, 0]]
            if cfg.is_log:
                jac = sym_funcm_frechet(pi, np.exp, np.exp)
                constant = spd_exp(pi) - jac @ pi
            for j in range(nv):
                for c in (0, 1):
                    coupling = np.zeros(3)
                    for x in (0, 1):
                        coupling[PACKED[(c, x)]] += integral_grad[j, x]
                    row = self._u(c, vd[j])
                    if cfg.is_log:
                        for n in range(3):
                            a[row, self._s(k, n)] += factor * coupling @ jac[:, n]
                        b[row] -= factor * coupling @ constant
                    else:
                        for n in range(3):
                            a[row, self._s(k, n)] += factor * coupling[n]

            # stress time derivative
            area = m.areas[k]
            source = remapped[k] if remapped is not None else old[disc.sdofs.cell_dofs[k, 0]]
            for n in range(3):
                a[self._s(k, n), self._s(k, n)] += area / cfg.dt
                b[self._s(k, n)] += area * source[n] / cfg.dt

            if cfg.is_log:
                self._log_terms(a, b, k, vd, integral_grad, pi)
            else:
                self._conformation_terms(a, b, k, vd, integral_grad, pi, u_k)

        if cfg.advection == Advection.DG:
            self._upwind_terms(a, state)
        return self._constrain(a, b)

    def _velocity_gradient_basis(self, integral_grad, j, c):
        g = np.zeros((2, 2))
        g[c, :] = integral_grad[j]
        return g

    def _conformation_terms(self, a, b, k, vd, integral_grad, pi, u_k):
        area = self.m.areas[k]
        wi = self.cfg.params.wi
        for n in range(3):
            a[self._s(k, n), self._s(k, n)] += area / wi
            b[self._s(k, n)] += area * IDENTITY[n] / wi
        gbar = np.zeros((2, 2))
        for j in range(len(vd)):
            for c in (0, 1):
                gbar[c, :] += u_k[vd[j], c] * integral_grad[j]
        lmat = upper_convected_matrix(gbar)
        for r in range(3):
            for n in range(3):
                a[self._s(k, r), self._s(k, n)] -= lmat[r, n]
        for j in range(len(vd)):
            for c in (0, 1):
                column = upper_convected(self._velocity_gradient_basis(integral_grad, j, c), pi)
                for r in range(3):
                    a[self._s(k, r), self._u(c, vd[j])] -= column[r]
        b[[self._s(k, r) for r in range(3)]] -= upper_convected(gbar, pi)

    def _log_terms(self, a, b, k, vd, integral_grad, pi):
        area = self.m.areas[k]
        cfg = self.cfg
        wi = cfg.params.wi
        for j in range(len(vd)):
            for c in (0, 1):
                column = log_convection(self._velocity_gradient_basis(integral_grad, j, c), pi, cfg.degeneracy_tol)
                for r in range(3):
                    a[self._s(k, r), self._u(c, vd[j])] -= column[r]
        value = sym_funcm(pi, lambda x: np.exp(-x))
        jac = sym_funcm_frechet(pi, lambda x: np.exp(-x), lambda x: -np.exp(-x))
        for r in range(3):
            for n in range(3):
                a[self._s(k, r), self._s(k, n)] -= area / wi * jac[r, n]
        b[[self._s(k, r) for r in range(3)]] += area / wi * (value - jac @ pi - IDENTITY)

    def _upwind_terms(self, a, state):
        m = self.m
        t, w = edge_quadrature(self.cfg.edge_points)
        for e in np.flatnonzero(m.edge_elements[:, 1] >= 0):
            kl, bl = m.edge_barycentric(np.array([e]), 0, t)
            kr, br = m.edge_barycentric(np.array([e]), 1, t)
            for q in range(len(t)):
                vl = state.velocity.values(kl, bl[:, q])[0]
                vr = state.velocity.values(kr, br[:, q])[0]
                un = 0.5 * (vl + vr) @ m.edge_normals[e]
                down, up = (kr[0], kl[0]) if un >= 0.0 else (kl[0], kr[0])
                weight = m.edge_lengths[e] * w[q] * abs(un)
                for n in range(3):
                    a[self._s(down, n), self._s(down, n)] += weight
                    a[self._s(down, n), self._s(up, n)] -= weight

    def _constrain(self, a, b):
        fixed = np.asarray(self.disc.boundary_unknowns)
        a[fixed, :] = 0.0
        a[:, fixed] = 0.0
        a[fixed, fixed] = 1.0
        b[fixed] = 0.0
        return a, b
