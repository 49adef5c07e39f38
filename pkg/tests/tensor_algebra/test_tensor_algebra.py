#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.


import unittest

import numpy as np
from numpy.testing import assert_allclose

from oldroyd.exceptions import DomainError, MatrixOverflowError
from oldroyd.tensor_algebra import (IDENTITY, check_spd, commutator_norm, decompose_gradient, double_dot,
                                    entropy_terms, jacobi_check, log_convection, random_spd, random_sym,
                                    reconstruct_gradient, spd_exp, spd_inv, spd_log, sym_eig, sym_funcm,
                                    sym_funcm_frechet, to_full, trace, upper_convected, verify_pair_inequalities)


class TestSymmetricFunctions(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.RandomState(7)

    def test_eig_reconstructs_matrix(self):
        s = random_sym(self.rng, 200)
        values, rotation = sym_eig(s)
        self.assertTrue(np.all(values[:, 0] >= values[:, 1]))
        full = rotation @ (values[:, :, None] * np.eye(2)) @ np.swapaxes(rotation, 1, 2)
        assert_allclose(full, to_full(s), atol=1e-13)
        assert_allclose(np.linalg.det(rotation), 1.0, atol=1e-14)

    def test_log_and_exp_are_inverse(self):
        s = random_spd(self.rng, 200, max_log10_cond=4.0)
        assert_allclose(spd_exp(spd_log(s)), s, rtol=1e-11, atol=1e-12)

    def test_exp_of_zero_is_identity(self):
        assert_allclose(spd_exp(np.zeros(3)), IDENTITY)

    def test_inverse(self):
        s = random_spd(self.rng, 50, max_log10_cond=3.0)
        product = to_full(s) @ to_full(spd_inv(s))
        assert_allclose(product, np.broadcast_to(np.eye(2), product.shape), atol=1e-10)

    def test_check_spd_reports_index(self):
        s = np.array([[2.0, 0.0, 1.0], [1.0, 2.0, 1.0], [1.0, 0.0, 1.0]])
        with self.assertRaises(DomainError) as ctx:
            check_spd(s)
        self.assertEqual(ctx.exception.index, 1)
        self.assertLess(ctx.exception.eigenvalue, 0.0)
        self.assertEqual(ctx.exception.get_error_code(), 'SpdDomainError')

    def test_log_rejects_indefinite(self):
        self.assertRaises(DomainError, spd_log, np.array([1.0, 0.0, -1.0]))

    def test_exp_overflow(self):
        self.assertRaises(MatrixOverflowError, spd_exp, np.array([800.0, 0.0, 1.0]))

    def test_entropy_terms_of_diagonal(self):
        first, second = entropy_terms(np.array([2.0, 0.0, 0.5]))
        self.assertAlmostEqual(float(first), 0.5, places=14)
        self.assertAlmostEqual(float(second), 2.0 + 0.5 + 0.5 + 2.0 - 4.0, places=14)
        first, second = entropy_terms(IDENTITY)
        self.assertEqual(float(first), 0.0)
        self.assertEqual(float(second), 0.0)

    def test_frechet_matches_finite_difference(self):
        s = random_sym(self.rng, 20, bound=1.0)
        h = random_sym(self.rng, 20, bound=1.0)
        jac = sym_funcm_frechet(s, np.exp, np.exp)
        step = 1e-6
        fd = (sym_funcm(s + step * h, np.exp) - sym_funcm(s - step * h, np.exp)) / (2.0 * step)
        assert_allclose(np.einsum('nij,nj->ni', jac, h), fd, atol=1e-7)

    def test_frechet_at_coincident_eigenvalues(self):
        jac = sym_funcm_frechet(np.array([0.3, 0.0, 0.3]), np.exp, np.exp)
        assert_allclose(jac, np.exp(0.3) * np.eye(3), rtol=1e-12)


class TestPairInequalities(unittest.TestCase):

    def test_random_pairs(self):
        rng = np.random.RandomState(3)
        report = verify_pair_inequalities(random_spd(rng, 5000), random_spd(rng, 5000))
        for slack in (report.trace_product, report.log_det, report.entropy):
            self.assertGreaterEqual(float(np.min(slack / report.scale)), -1e-12)
        self.assertLess(float(np.max(report.log_det_identity / report.scale)), 1e-12)

    def test_equal_pair_has_zero_slack(self):
        s = np.array([[2.0, 0.3, 1.0]])
        report = verify_pair_inequalities(s, s)
        assert_allclose(report.log_det, 0.0, atol=1e-14)
        assert_allclose(report.entropy, 0.0, atol=1e-14)


class TestGradientAlgebra(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.RandomState(11)

    def test_upper_convected(self):
        g = self.rng.uniform(-1.0, 1.0, size=(30, 2, 2))
        s = random_sym(self.rng, 30)
        full = g @ to_full(s) + to_full(s) @ np.swapaxes(g, 1, 2)
        assert_allclose(to_full(upper_convected(g, s)), full, atol=1e-13)

    def test_decomposition(self):
        g = self.rng.uniform(-1.0, 1.0, size=(500, 2, 2))
        s = random_spd(self.rng, 500, max_log10_cond=2.0)
        dec = decompose_gradient(g, s)
        assert_allclose(reconstruct_gradient(dec, s), g, atol=1e-11)
        self.assertLess(float(np.max(commutator_norm(dec.b, s))), 1e-11)

    def test_decomposition_of_isotropic_stress(self):
        g = np.array([[0.1, 0.4], [-0.2, 0.3]])
        dec = decompose_gradient(g, 2.0 * IDENTITY)
        self.assertEqual(float(dec.n), 0.0)
        assert_allclose(reconstruct_gradient(dec, 2.0 * IDENTITY), g, atol=1e-15)

    def test_log_convection_energy_identity(self):
        g = self.rng.uniform(-1.0, 1.0, size=(500, 2, 2))
        psi = random_sym(self.rng, 500, bound=2.0)
        rotation = log_convection(g, psi)
        e = spd_exp(psi)
        g_dot_e = np.einsum('nij,nij->n', g, to_full(e))
        assert_allclose(double_dot(rotation, e), 2.0 * g_dot_e, rtol=1e-11, atol=1e-11)
        assert_allclose(trace(rotation), 2.0 * (g[:, 0, 0] + g[:, 1, 1]), atol=1e-12)

    def test_log_convection_matches_decomposition(self):
        g = self.rng.uniform(-1.0, 1.0, size=(100, 2, 2))
        psi = random_sym(self.rng, 100, bound=1.0)
        dec = decompose_gradient(g, spd_exp(psi))
        omega = np.zeros((100, 2, 2))
        omega[:, 0, 1] = dec.omega
        omega[:, 1, 0] = -dec.omega
        expected = omega @ to_full(psi) - to_full(psi) @ omega + 2.0 * to_full(dec.b)
        assert_allclose(to_full(log_convection(g, psi)), expected, atol=1e-9)

    def test_jacobi_formulas(self):
        base = np.array([1.5, 0.2, 0.7])
        direction = np.array([0.3, -0.1, 0.2])

        def path(t):
            return base + t * direction

        residuals = [max(jacobi_check(path, 0.1, h)) for h in (1e-3, 1e-4)]
        self.assertLess(residuals[1], 1e-7)
        self.assertGreater(residuals[0] / max(residuals[1], 1e-300), 30.0)

    def test_jacobi_rejects_bad_step(self):
        self.assertRaises(ValueError, jacobi_check, lambda t: IDENTITY, 0.0, 0.0)


if __name__ == '__main__':
    unittest.main()
