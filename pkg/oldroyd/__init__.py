#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

from .version import __version__
from .exceptions import *
from .mesh import Mesh, Rectangle, barycentric_refine, build_structured_mesh, perturb_mesh, read_mesh, write_mesh
from .spaces import Family, FEField, SpaceSpec, SymTensorField, interpolate, pi_h
from .projections import ProjectedVelocity, project_bdm, project_rot, project_rt0
from .schemes import (Advection, Elements, Formulation, PhysicalParams, Projector, SchemeConfig, State,
                      StressSpace, Stepper, assemble_system, fixed_point_solve, step)
from .diagnostics import (InitialCondition, InitialKind, RunConfig, Runner, check_dissipation, compute_free_energy,
                          estimate_decay_rate, initial_state, load_run_config, run_simulation, verify_lemmas)
