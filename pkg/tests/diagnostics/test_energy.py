#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.


import unittest

import numpy as np

from oldroyd.diagnostics import (EnergyEvaluator, EnergyRecord, InitialCondition, InitialKind, check_dissipation,
                                 compute_free_energy, dissipation_tolerance, estimate_decay_rate,
                                 estimate_poincare_constant, initial_state, theoretical_decay_rate)
from oldroyd.exceptions import PositivityError
from oldroyd.mesh import barycentric_refine, build_structured_mesh
from oldroyd.schemes import Advection, Discretization, Formulation, PhysicalParams, SchemeConfig, StressSpace, Stepper

RELAXATION = InitialCondition(InitialKind.RELAXATION, sigma0=(2.0, 0.0, 0.5))


def _records(slope, dt=0.1, n=30, scale=1.0):
    return [EnergyRecord(n=i, time=i * dt, F=scale * np.exp(slope * i * dt), kinetic=0.0, entropic=0.0,
                         diss_kinetic=0.0, diss_viscous=0.0, diss_stress=0.0, min_eig=1.0, fp_iters=1)
            for i in range(n)]


class TestFreeEnergy(unittest.TestCase):

    def setUp(self):
        self.m = barycentric_refine(build_structured_mesh(2, 2))

    def test_relaxation_state(self):
        # tr(diag(2, 1/2) - ln diag(2, 1/2) - I) = 1/2, times eps / 2Wi = 1/4
        for formulation in (Formulation.CONFORMATION, Formulation.LOG):
            cfg = SchemeConfig(formulation=formulation, params=PhysicalParams(wi=1.0, eps=0.5))
            disc = Discretization(self.m, cfg)
            record = EnergyEvaluator(disc).record(initial_state(disc, RELAXATION))
            self.assertAlmostEqual(record.F, 0.125, places=13)
            self.assertEqual(record.kinetic, 0.0)
            self.assertAlmostEqual(record.min_eig, 0.5, places=13)
            self.assertEqual(record.diss_stress, 0.0)

    def test_equilibrium_has_no_energy(self):
        cfg = SchemeConfig()
        disc = Discretization(self.m, cfg)
        record = compute_free_energy(initial_state(disc), cfg, self.m)
        self.assertEqual(record.F, 0.0)
        self.assertEqual(record.n, 0)

    def test_dissipation_needs_previous_state(self):
        cfg = SchemeConfig(dt=0.1)
        stepper = Stepper(self.m, cfg)
        state = initial_state(stepper.disc, InitialCondition(InitialKind.VORTEX))
        new, _ = stepper.step(state)
        evaluator = EnergyEvaluator(stepper.disc)
        record = evaluator.record(new, state, fp_iters=2)
        self.assertGreater(record.diss_kinetic, 0.0)
        self.assertGreater(record.diss_viscous, 0.0)
        self.assertGreater(record.diss_stress, 0.0)
        self.assertEqual(record.fp_iters, 2)
        self.assertAlmostEqual(record.time, 0.1)
        self.assertAlmostEqual(record.F, record.kinetic + record.entropic, places=15)

    def test_positivity_loss(self):
        cfg = SchemeConfig()
        disc = Discretization(self.m, cfg)
        state = initial_state(disc)
        coefficients = state.stress.coefficients.copy()
        coefficients[3] = [-1.0, 0.0, 1.0]
        with self.assertRaises(PositivityError) as ctx:
            EnergyEvaluator(disc).record(state.replace(stress=disc.stress_field(coefficients)))
        self.assertEqual(ctx.exception.element, 3)

    def test_p1disc_energy_reads_barycenter_values(self):
        cfg = SchemeConfig(advection=Advection.DG, stress_space=StressSpace.P1DISC)
        disc = Discretization(self.m, cfg)
        state = initial_state(disc)
        coefficients = state.stress.coefficients.copy()
        coefficients[disc.sdofs.cell_dofs[3, 1]] = [1.0, 0.0, -0.2]
        record = EnergyEvaluator(disc).record(state.replace(stress=disc.stress_field(coefficients)))
        self.assertAlmostEqual(record.min_eig, 0.6, places=12)
        # pi_h sigma = diag(1, 0.6) on element 3 only
        expected = cfg.params.eps / (2.0 * cfg.params.wi) * self.m.areas[3] * (0.6 - np.log(0.6) - 1.0)
        self.assertAlmostEqual(record.entropic, expected, places=13)


class TestCertificate(unittest.TestCase):

    def test_tolerance(self):
        cfg = SchemeConfig()
        self.assertAlmostEqual(dissipation_tolerance(cfg, 0.5), 2e-9, places=20)
        self.assertAlmostEqual(dissipation_tolerance(cfg, 10.0), 2e-8, places=20)

    def test_vortex_steps_certify_and_mutation_fails(self):
        m = barycentric_refine(build_structured_mesh(2, 2))
        cfg = SchemeConfig(dt=0.05)
        stepper = Stepper(m, cfg)
        evaluator = EnergyEvaluator(stepper.disc)
        state = initial_state(stepper.disc, InitialCondition(InitialKind.VORTEX))
        prev = evaluator.record(state)
        tol = dissipation_tolerance(cfg, prev.F)
        for _ in range(3):
            new, report = stepper.step(state)
            record = evaluator.record(new, state, report.fp_iters)
            certificate = check_dissipation(prev, record, tol)
            self.assertTrue(certificate.passed)
            self.assertEqual(certificate.n, new.n)
            # an energy that grows over the step is never certified
            grown = record._replace(F=prev.F + 1e-6)
            self.assertFalse(check_dissipation(prev, grown, tol).passed)
            state, prev = new, record


class TestDecay(unittest.TestCase):

    def test_exact_exponential(self):
        fit = estimate_decay_rate(_records(-2.0))
        self.assertAlmostEqual(fit.slope, -2.0, places=10)
        self.assertLess(fit.residual, 1e-10)
        self.assertFalse(fit.truncated)
        self.assertEqual(fit.used, 15)

    def test_truncated_at_energy_floor(self):
        records = _records(-40.0, n=20)
        fit = estimate_decay_rate(records)
        self.assertTrue(fit.truncated)
        self.assertAlmostEqual(fit.slope, -40.0, places=8)

    def test_too_few_records(self):
        fit = estimate_decay_rate(_records(-1.0, n=1))
        self.assertTrue(np.isnan(fit.slope))

    def test_relaxation_rate(self):
        wi, dt = 1.0, 0.05
        m = barycentric_refine(build_structured_mesh(2, 2))
        cfg = SchemeConfig(dt=dt, params=PhysicalParams(wi=wi), freeze_velocity=True)
        stepper = Stepper(m, cfg)
        evaluator = EnergyEvaluator(stepper.disc)
        state = initial_state(stepper.disc, RELAXATION)
        records = [evaluator.record(state)]
        for _ in range(100):
            new, _ = stepper.step(state)
            records.append(evaluator.record(new, state))
            state = new
        fit = estimate_decay_rate(records)
        self.assertAlmostEqual(fit.slope, -2.0 * np.log1p(dt / wi) / dt, delta=0.05)
        self.assertAlmostEqual(fit.slope, -2.0 / wi, delta=0.1)

    def test_theoretical_rate(self):
        poincare = 1.0 / (2.0 * np.pi ** 2)
        self.assertEqual(theoretical_decay_rate(PhysicalParams(re=1.0, wi=0.5, eps=0.5), poincare), 2.0)
        rate = theoretical_decay_rate(PhysicalParams(re=100.0, wi=0.5, eps=0.5), poincare)
        self.assertAlmostEqual(rate, 2.0 * np.pi ** 2 / 100.0, places=12)
        self.assertEqual(theoretical_decay_rate(PhysicalParams(re=0.0, wi=0.25), poincare), 4.0)

    def test_poincare_constant_of_unit_square(self):
        exact = 1.0 / (2.0 * np.pi ** 2)
        estimate = estimate_poincare_constant(build_structured_mesh(16, 16))
        self.assertLess(estimate, exact)
        self.assertAlmostEqual(estimate / exact, 1.0, delta=0.03)
        self.assertRaises(ValueError, estimate_poincare_constant, build_structured_mesh(1, 1))


if __name__ == '__main__':
    unittest.main()
