#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

from .config import (Advection, Elements, FixedPointOptions, Formulation, LinearSolverOptions, PhysicalParams,
                     Projector, SchemeConfig, StressSpace, valid_combinations)
from .state import FixedPointResult, LinearSolveStats, State, StepReport, VelocityPressureState
from .discretization import Discretization
from .assembly import SchemeAssembler, StepContext, assemble_system, prepare_step
from .linear_solver import SparseLUSolver, estimate_condition, solve_linear
from .lie import lie_step_local
from .stepper import Stepper, fixed_point_solve, step
