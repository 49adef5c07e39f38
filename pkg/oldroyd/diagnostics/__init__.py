#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

from .energy import EnergyEvaluator, EnergyRecord, compute_free_energy
from .certificate import Certificate, check_dissipation, dissipation_slack, dissipation_tolerance
from .decay import DecayFit, estimate_decay_rate, estimate_poincare_constant, theoretical_decay_rate
from .lemmas import LemmaReport, verify_lemmas
from .initial_conditions import InitialCondition, InitialKind, initial_state, leray_projection
from .output import (CSV_HEADER, EnergyTraceWriter, certificate_summary, read_energy_trace,
                     write_certificate_summary, write_vtk)
from .run_config import MeshOptions, RunConfig, RunOptions, load_run_config, parse_run_config
from .runner import (EXIT_CERTIFICATE, EXIT_CONFIG, EXIT_PASS, EXIT_SOLVER, Runner, RunResult, SweepOutcome,
                     dt_sweep, log_separation, run_simulation)
