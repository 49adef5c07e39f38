#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.


import unittest

from oldroyd.diagnostics import LemmaReport, verify_lemmas


class TestVerifyLemmas(unittest.TestCase):

    def test_small_run_passes(self):
        report = verify_lemmas(samples=300, seed=1)
        self.assertTrue(report.passed, report.to_dict())
        self.assertGreaterEqual(report.pair_slack, -1e-12)
        self.assertGreaterEqual(report.jacobi_order, 1.5)
        self.assertEqual(report.samples, 300)

    def test_deterministic_for_a_seed(self):
        self.assertEqual(verify_lemmas(samples=50, seed=4).to_dict(), verify_lemmas(samples=50, seed=4).to_dict())

    def test_rejects_empty_run(self):
        self.assertRaises(ValueError, verify_lemmas, samples=0)

    def test_report_flags_failures(self):
        results = dict(pair_slack=0.0, log_det_identity=0.0, jacobi=[1e-6, 1e-8], jacobi_order=2.0,
                       decomposition=0.0, commutation=0.0, log_convection=0.0, projection=0.0, exp_commutation=0.0)
        self.assertTrue(LemmaReport(10, 0, **results).passed)
        results['pair_slack'] = -1e-6
        report = LemmaReport(10, 0, **results)
        self.assertFalse(report.passed)
        self.assertFalse(report.to_dict()['passed'])
        self.assertRaises(AttributeError, getattr, report, 'missing')


if __name__ == '__main__':
    unittest.main()
