#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Energy trace (CSV), snapshots (legacy ASCII VTK) and the certificate summary (JSON)."""

import csv
import io
import json
import logging
import os

import numpy as np
import six

__all__ = ['CSV_HEADER', 'EnergyTraceWriter', 'read_energy_trace', 'write_vtk', 'snapshot_path',
           'certificate_summary', 'write_certificate_summary']

logger = logging.getLogger(__name__)

CSV_HEADER = ['step', 'time', 'F', 'kinetic', 'entropic', 'diss_kinetic', 'diss_viscous', 'diss_stress',
              'min_eig', 'fp_iters', 'slack']

VTK_TRI = 5


def _float(value):
    return repr(float(value))


def _finite(value):
    return float(value) if np.isfinite(value) else None


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        os.makedirs(parent)


class EnergyTraceWriter(object):
    """ one CSV row per EnergyRecord, floats at full precision

    The slack column is empty on the initial row and carries the certificate
    slack of the step on every other row.
    """

    def __init__(self, path):
        _ensure_parent(path)
        self.path = path
        self._file = io.open(path, 'w', newline='') if six.PY3 else open(path, 'wb')
        self._writer = csv.writer(self._file)
        self._writer.writerow(CSV_HEADER)
        self.rows = 0

    def write(self, record, slack=None):
        row = [str(record.n), _float(record.time), _float(record.F), _float(record.kinetic),
               _float(record.entropic), _float(record.diss_kinetic), _float(record.diss_viscous),
               _float(record.diss_stress), _float(record.min_eig), str(record.fp_iters),
               '' if slack is None else _float(slack)]
        self._writer.writerow(row)
        self._file.flush()
        self.rows += 1

    def close(self):
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


def read_energy_trace(path):
    """ :return: list of dicts keyed by CSV_HEADER, numbers parsed; slack is None on the initial row """
    rows = []
    with io.open(path, 'r', newline='') if six.PY3 else open(path, 'rb') as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(u'unexpected energy trace header: {0}'.format(','.join(header)))
        for line in reader:
            row = dict(zip(header, line))
            parsed = {}
            for key, value in six.iteritems(row):
                if key in ('step', 'fp_iters'):
                    parsed[key] = int(value)
                elif value == '':
                    parsed[key] = None
                else:
                    parsed[key] = float(value)
            rows.append(parsed)
    return rows


def snapshot_path(directory, n):
    return os.path.join(directory, 'state_{0:06d}.vtk'.format(n))


def write_vtk(path, state, title=u'oldroyd-fe'):
    """ legacy ASCII unstructured grid of a State

    velocity: point data, sampled at the mesh vertices
    pressure: cell data, value at the barycenter
    stress: cell data, pi_h of the stress as a 3x3 tensor (sigma, or psi for the log formulation)
    """
    m = state.mesh
    bary = np.array([[1.0, 1.0, 1.0]]) / 3.0
    velocity = state.velocity.vertex_values()
    pressure = state.pressure.element_values(bary)[:, 0, 0]
    stress = state.stress.barycenter_values()

    lines = [u'# vtk DataFile Version 3.0', u'{0} step {1}'.format(title, state.n), u'ASCII',
             u'DATASET UNSTRUCTURED_GRID', u'POINTS {0} double'.format(m.n_vertices)]
    lines.extend(u'{0} {1} 0.0'.format(_float(x), _float(y)) for x, y in m.vertices)
    lines.append(u'CELLS {0} {1}'.format(m.n_triangles, 4 * m.n_triangles))
    lines.extend(u'3 {0} {1} {2}'.format(*t) for t in m.triangles)
    lines.append(u'CELL_TYPES {0}'.format(m.n_triangles))
    lines.extend(u'{0}'.format(VTK_TRI) for _ in range(m.n_triangles))

    lines.append(u'POINT_DATA {0}'.format(m.n_vertices))
    lines.append(u'VECTORS velocity double')
    lines.extend(u'{0} {1} 0.0'.format(_float(ux), _float(uy)) for ux, uy in velocity)

    lines.append(u'CELL_DATA {0}'.format(m.n_triangles))
    lines.append(u'SCALARS pressure double 1')
    lines.append(u'LOOKUP_TABLE default')
    lines.extend(_float(p) for p in pressure)
    lines.append(u'TENSORS stress double')
    for a, b, c in stress:
        lines.append(u'{0} {1} 0.0 {1} {2} 0.0 0.0 0.0 0.0'.format(_float(a), _float(b), _float(c)))

    _ensure_parent(path)
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(u'\n'.join(lines) + u'\n')
    logger.debug(u"wrote snapshot {0}".format(path))
    return path


def certificate_summary(certificates, tol, min_eig, experimental=False, decay=None, error=None):
    """ machine readable outcome of a run

    :type certificates: list of Certificate
    :param certificates: one per step

    :type decay: DecayFit
    :param decay: fitted decay of the run, or None

    :type error: SolverException
    :param error: solver error that stopped the run, or None

    :return: dict
    """
    failed = [c.n for c in certificates if not c.passed]
    worst = max([c.slack for c in certificates]) if certificates else None
    if error is not None:
        status = 'error'
    elif failed:
        status = 'failed'
    else:
        status = 'passed'
    summary = {
        'status': status,
        'steps': len(certificates),
        'worst_slack': worst,
        'tol': float(tol),
        'failed_steps': failed,
        'min_eig': None if min_eig is None else float(min_eig),
        'experimental': bool(experimental),
        'decay': None if decay is None else {'slope': _finite(decay.slope), 'residual': _finite(decay.residual),
                                             'used': decay.used, 'truncated': decay.truncated},
    }
    if error is not None:
        summary['error'] = {'code': error.get_error_code(), 'message': error.get_error_message()}
    return summary


def write_certificate_summary(path, summary):
    _ensure_parent(path)
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(six.text_type(json.dumps(summary, indent=2, sort_keys=True, default=str)))
    return path
