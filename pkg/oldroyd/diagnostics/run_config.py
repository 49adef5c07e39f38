#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""INI run configuration.

::

    [scheme]
    formulation = conformation
    advection = characteristic
    elements = scott-vogelius
    stress_space = P0
    dt = 0.01

    [params]
    re = 1.0
    wi = 0.5
    eps = 0.5

    [mesh]
    nx = 8
    ny = 8

    [initial]
    kind = vortex

    [run]
    steps = 50
    output_dir = out

Every key is optional; unknown sections and keys are rejected.
"""

import logging
import os

import six
from six.moves import configparser

from ..exceptions import ConfigError
from ..mesh import Rectangle, barycentric_refine, build_structured_mesh, perturb_mesh, read_mesh
from ..schemes.config import (Elements, FixedPointOptions, LinearSolverOptions, PhysicalParams, SchemeConfig)
from ..util import Util
from .initial_conditions import InitialCondition, InitialKind

__all__ = ['RunConfig', 'MeshOptions', 'RunOptions', 'load_run_config', 'parse_run_config', 'SCHEMA']

logger = logging.getLogger(__name__)


def _floats(value):
    return tuple(float(v) for v in value.replace(',', ' ').split())


def _optional_bool(value):
    return None if value.strip().lower() in ('', 'auto') else Util.to_bool(value)


SCHEMA = {
    'scheme': {
        'formulation': str, 'advection': str, 'elements': str, 'stress_space': str, 'velocity_projector': str,
        'dt': float, 'degeneracy_tol': float, 'flow_substeps': int, 'freeze_velocity': Util.to_bool,
        'pressure_stabilization': Util.to_bool, 'edge_points': int, 'quadrature_order': int,
    },
    'params': {'re': float, 'wi': float, 'eps': float},
    'fixed_point': {'tol': float, 'max_iters': int},
    'linear_solver': {'tol': float, 'max_iters': int},
    'mesh': {'file': str, 'nx': int, 'ny': int, 'domain': _floats, 'refine': _optional_bool,
             'perturbation': float, 'seed': int},
    'initial': {'kind': str, 'sigma0': _floats, 'amplitude': float, 'perturbation': float},
    'run': {'steps': int, 'output_dir': str, 'csv': str, 'summary': str, 'vtk_every': int, 'seed': int,
            'stop_on_failure': Util.to_bool},
}


class MeshOptions(object):
    """
    :type file: str
    :param file: ASCII mesh file; when set, nx/ny/domain are ignored

    :type refine: bool
    :param refine: barycentric refinement; None means "refine for scott-vogelius only"

    :type perturbation: float
    :param perturbation: interior vertex jitter, as a fraction of the shortest edge
    """

    def __init__(self, file=None, nx=8, ny=8, domain=(0.0, 0.0, 1.0, 1.0), refine=None, perturbation=0.0, seed=0):
        self.file = file
        self.nx = int(nx)
        self.ny = int(ny)
        self.domain = tuple(float(v) for v in domain)
        self.refine = refine
        self.perturbation = float(perturbation)
        self.seed = int(seed)

    def resolved_refine(self, elements):
        return elements == Elements.SCOTT_VOGELIUS if self.refine is None else bool(self.refine)

    def validate(self, elements):
        if self.file is None and (self.nx < 1 or self.ny < 1):
            raise ConfigError(settings='mesh.nx', msg=u'nx and ny must be >= 1')
        if len(self.domain) != 4:
            raise ConfigError(settings='mesh.domain', msg=u'domain takes four numbers x0 y0 x1 y1')
        if not 0.0 <= self.perturbation < 0.5:
            raise ConfigError(settings='mesh.perturbation', msg=u'perturbation must lie in [0, 0.5)')
        if elements == Elements.SCOTT_VOGELIUS and not self.resolved_refine(elements):
            raise ConfigError(settings='mesh.refine', msg=u'scott-vogelius elements need refine = true')

    def build(self, elements):
        """ :return: Mesh; raises MeshError on unreadable or invalid meshes """
        if self.file:
            m = read_mesh(self.file)
        else:
            m = build_structured_mesh(self.nx, self.ny, Rectangle(*self.domain))
        if self.perturbation > 0.0:
            m = perturb_mesh(m, self.perturbation, self.seed)
        if self.resolved_refine(elements):
            m = barycentric_refine(m)
        return m


class RunOptions(object):
    """
    :type steps: int
    :param steps: number of time steps N_T

    :type output_dir: str
    :param output_dir: directory of the CSV trace, the summary and the snapshots; None writes nothing

    :type vtk_every: int
    :param vtk_every: snapshot period in steps, 0 disables VTK output

    :type stop_on_failure: bool
    :param stop_on_failure: end the run at the first failed certificate
    """

    def __init__(self, steps=10, output_dir=None, csv='energy.csv', summary='certificate.json', vtk_every=0, seed=0,
                 stop_on_failure=False):
        self.steps = int(steps)
        self.output_dir = output_dir
        self.csv = csv
        self.summary = summary
        self.vtk_every = int(vtk_every)
        self.seed = int(seed)
        self.stop_on_failure = bool(stop_on_failure)

    def path(self, name):
        if self.output_dir is None or not name:
            return None
        return os.path.join(self.output_dir, name)

    def validate(self):
        if self.steps < 0:
            raise ConfigError(settings='run.steps', msg=u'steps must be >= 0')
        if self.vtk_every < 0:
            raise ConfigError(settings='run.vtk_every', msg=u'vtk_every must be >= 0')


class RunConfig(object):
    """ everything needed to reproduce one simulation

    :type scheme: SchemeConfig
    :param scheme: scheme options

    :type mesh: MeshOptions
    :param mesh: mesh source

    :type initial: InitialCondition
    :param initial: initial state scenario

    :type run: RunOptions
    :param run: step count and output paths
    """

    def __init__(self, scheme=None, mesh=None, initial=None, run=None, source=None):
        self.scheme = scheme or SchemeConfig()
        self.mesh = mesh or MeshOptions()
        self.initial = initial or InitialCondition()
        self.run = run or RunOptions()
        self.source = source

    def validate(self):
        """ check every option before any mesh or matrix is built

        :raise ConfigError:
        """
        self.scheme.validate()
        self.mesh.validate(self.scheme.elements)
        self.initial.validate()
        self.run.validate()
        return self

    def build_mesh(self):
        return self.mesh.build(self.scheme.elements)

    def __repr__(self):
        return 'RunConfig({0!r}, {1!r}, steps={2})'.format(self.scheme, self.initial, self.run.steps)


def _check_key(section, key):
    schema = SCHEMA.get(section)
    if schema is None:
        raise ConfigError(settings=section, msg=u'unknown section [{0}], expected one of {1}'.format(
            section, sorted(SCHEMA)))
    if key not in schema:
        raise ConfigError(settings=u'{0}.{1}'.format(section, key),
                          msg=u'unknown key "{0}" in [{1}], expected one of {2}'.format(key, section, sorted(schema)))
    return schema[key]


def _convert(section, key, raw):
    parse = _check_key(section, key)
    try:
        return parse(raw.strip())
    except ValueError as ex:
        raise ConfigError(ex, settings=u'{0}.{1}'.format(section, key), msg=u'cannot parse "{0}"'.format(raw))


def _resolve(basedir, path):
    if path is None or os.path.isabs(path) or basedir is None:
        return path
    return os.path.normpath(os.path.join(basedir, path))


def parse_run_config(sections, basedir=None, source=None):
    """ build a validated RunConfig from {section: {key: raw string or value}}

    :type sections: dict
    :param sections: parsed INI content; values that are not strings are taken as they are

    :type basedir: str
    :param basedir: directory relative mesh and output paths are resolved against
    """
    values = {}
    for section, entries in six.iteritems(sections):
        if section not in SCHEMA:
            _check_key(section, '')
        values[section] = {}
        for key, raw in six.iteritems(entries):
            if isinstance(raw, six.string_types):
                values[section][key] = _convert(section, key, raw)
            else:
                _check_key(section, key)
                values[section][key] = raw

    scheme_args = dict(values.get('scheme', {}))
    initial = InitialCondition(**values.get('initial', {}))
    if initial.kind == InitialKind.RELAXATION and 'freeze_velocity' not in scheme_args:
        logger.info(u"relaxation scenario: freezing the velocity at zero")
        scheme_args['freeze_velocity'] = True
    scheme = SchemeConfig(params=PhysicalParams(**values.get('params', {})),
                          fixed_point=FixedPointOptions(**values.get('fixed_point', {})),
                          linear_solver=LinearSolverOptions(**values.get('linear_solver', {})),
                          **scheme_args)

    mesh_args = dict(values.get('mesh', {}))
    if mesh_args.get('file'):
        mesh_args['file'] = _resolve(basedir, mesh_args['file'])
    run_args = dict(values.get('run', {}))
    if run_args.get('output_dir'):
        run_args['output_dir'] = _resolve(basedir, run_args['output_dir'])
    cfg = RunConfig(scheme, MeshOptions(**mesh_args), initial, RunOptions(**run_args), source=source)
    return cfg.validate()


def load_run_config(path):
    """ read and validate an INI run configuration

    Relative mesh and output paths are resolved against the directory of the file.

    :raise ConfigError: unreadable file, unknown section or key, unparsable or incompatible values
    """
    parser = configparser.RawConfigParser()
    parser.optionxform = str
    try:
        read = parser.read(path)
    except configparser.Error as ex:
        raise ConfigError(ex, settings=path, msg=u'cannot parse the run configuration')
    if not read:
        raise ConfigError(settings=path, msg=u'cannot read the run configuration')
    sections = dict((s, dict(parser.items(s))) for s in parser.sections())
    logger.info(u"loaded run configuration {0}: sections {1}".format(path, sorted(sections)))
    return parse_run_config(sections, basedir=os.path.dirname(os.path.abspath(path)), source=path)
