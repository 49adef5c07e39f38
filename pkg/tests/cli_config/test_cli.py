#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.


import io
import json
import os
import shutil
import sys
import tempfile
import unittest

import six

from oldroyd.diagnostics import (EXIT_CONFIG, EXIT_PASS, SweepOutcome, dt_sweep, load_run_config, log_separation,
                                 read_energy_trace, run_simulation)
from oldroyd.diagnostics.cli import main

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'data')


class _Captured(object):
    """swap sys.stdout for a buffer"""

    def __enter__(self):
        self.stdout = sys.stdout
        sys.stdout = self.buffer = six.StringIO()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        sys.stdout = self.stdout


class TestRunSimulation(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _copy(self, name):
        path = os.path.join(self.tmp, name)
        shutil.copy(os.path.join(DATA, name), path)
        return path

    def test_equilibrium_run(self):
        path = self._copy('equilibrium.ini')
        self.assertEqual(run_simulation(path), EXIT_PASS)
        rows = read_energy_trace(os.path.join(self.tmp, 'out', 'energy.csv'))
        self.assertEqual(len(rows), 3 + 1)
        self.assertEqual([r['step'] for r in rows], [0, 1, 2, 3])
        self.assertTrue(all(r['F'] == 0.0 for r in rows))
        with io.open(os.path.join(self.tmp, 'out', 'certificate.json')) as f:
            summary = json.load(f)
        self.assertEqual(summary['status'], 'passed')
        self.assertEqual(summary['steps'], 3)
        self.assertEqual(summary['scheme'], 'conformation/characteristic/scott-vogelius/P0/none')

    def test_relaxation_run(self):
        path = self._copy('relaxation.ini')
        self.assertEqual(run_simulation(path), EXIT_PASS)
        rows = read_energy_trace(os.path.join(self.tmp, 'out', 'energy.csv'))
        self.assertAlmostEqual(rows[0]['F'], 0.125, places=13)
        energies = [r['F'] for r in rows]
        self.assertEqual(energies, sorted(energies, reverse=True))
        self.assertTrue(all(r['slack'] <= 1e-8 for r in rows[1:]))

    def test_vortex_snapshots(self):
        path = self._copy('vortex.ini')
        self.assertEqual(run_simulation(path), EXIT_PASS)
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(sorted(f for f in os.listdir(out) if f.endswith('.vtk')),
                         ['state_000000.vtk', 'state_000002.vtk', 'state_000004.vtk'])
        with io.open(os.path.join(out, 'certificate.json')) as f:
            summary = json.load(f)
        self.assertGreater(summary['theoretical_decay_rate'], 0.0)

    def test_configuration_errors(self):
        for name in ('unknown_key.ini', 'lie_p1disc.ini', 'missing_mesh.ini'):
            self.assertEqual(run_simulation(self._copy(name)), EXIT_CONFIG, name)
        self.assertEqual(run_simulation(os.path.join(self.tmp, 'absent.ini')), EXIT_CONFIG)


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.config = os.path.join(self.tmp, 'equilibrium.ini')
        shutil.copy(os.path.join(DATA, 'equilibrium.ini'), self.config)

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_no_command(self):
        with _Captured():
            self.assertEqual(main([]), EXIT_CONFIG)

    def test_run_and_check(self):
        self.assertEqual(main(['--log-level', 'WARNING', 'run', '--config', self.config]), EXIT_PASS)
        self.assertEqual(main(['--log-level', 'WARNING', 'check', '--config', self.config]), EXIT_PASS)
        self.assertEqual(main(['run', '--config', os.path.join(self.tmp, 'absent.ini')]), EXIT_CONFIG)

    def test_verify_lemmas(self):
        with _Captured() as captured:
            code = main(['--log-level', 'WARNING', 'verify-lemmas', '--samples', '200', '--seed', '1'])
        self.assertEqual(code, EXIT_PASS)
        report = json.loads(captured.buffer.getvalue())
        self.assertTrue(report['passed'])
        self.assertEqual(report['samples'], 200)

    def test_sweep(self):
        with _Captured() as captured:
            code = main(['--log-level', 'WARNING', 'sweep', '--config', self.config, '--dt', '0.1', '0.2'])
        self.assertEqual(code, EXIT_PASS)
        result = json.loads(captured.buffer.getvalue())
        self.assertEqual(len(result['outcomes']), 4)
        self.assertEqual(set(o['status'] for o in result['outcomes']), {'passed'})
        self.assertEqual(result['separated'], [])
        # the sweep never writes output
        self.assertFalse(os.path.exists(os.path.join(self.tmp, 'out')))

    def test_sweep_does_not_modify_the_base_config(self):
        cfg = load_run_config(self.config)
        dt_sweep(cfg, [0.2], formulations=('log',))
        self.assertEqual(cfg.scheme.dt, 0.1)
        self.assertEqual(cfg.run.output_dir, os.path.join(self.tmp, 'out'))


class TestLogSeparation(unittest.TestCase):

    def test_separated_time_steps(self):
        outcomes = [
            SweepOutcome(0.01, 'conformation', 'passed', 10, -1e-3, None),
            SweepOutcome(0.01, 'log', 'passed', 10, -1e-3, None),
            SweepOutcome(1.0, 'conformation', 'error', 2, None, 'PositivityLoss'),
            SweepOutcome(1.0, 'log', 'passed', 10, -1e-2, None),
            SweepOutcome(0.25, 'conformation', 'error', 3, None, 'FixedPointNonConvergence'),
            SweepOutcome(0.25, 'log', 'failed', 10, 1e-3, None),
        ]
        self.assertEqual(log_separation(outcomes), [1.0])


if __name__ == '__main__':
    unittest.main()
