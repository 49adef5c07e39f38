# encoding: utf-8
from __future__ import print_function

import logging
import os
import tempfile

from oldroyd import *
from oldroyd.diagnostics import MeshOptions, RunOptions, read_energy_trace


def sample_relaxation(output_dir):
    scheme = SchemeConfig(dt=0.1, params=PhysicalParams(wi=1.0, eps=0.5), freeze_velocity=True)
    initial = InitialCondition(InitialKind.RELAXATION, sigma0=(2.0, 0.0, 0.5))
    cfg = RunConfig(scheme, MeshOptions(nx=2, ny=2), initial, RunOptions(steps=20, output_dir=output_dir))

    result = Runner(cfg).run()
    print("status:", result.status)
    print("worst slack:", result.summary['worst_slack'])

    for row in read_energy_trace(os.path.join(output_dir, 'energy.csv'))[::5]:
        print("step {step:3d}  F = {F:.6e}".format(**row))


def sample_vortex(output_dir):
    scheme = SchemeConfig(Formulation.LOG, Advection.DG, dt=0.05, params=PhysicalParams(re=1.0, wi=0.5, eps=0.5))
    cfg = RunConfig(scheme, MeshOptions(nx=4, ny=4), InitialCondition(InitialKind.VORTEX),
                    RunOptions(steps=10, output_dir=output_dir, vtk_every=5))

    result = Runner(cfg).run()
    print("status:", result.status)
    print("decay slope:", result.summary['decay']['slope'])
    print("snapshots:", sorted(f for f in os.listdir(output_dir) if f.endswith('.vtk')))


def sample_lemmas():
    report = verify_lemmas(samples=200, seed=0)
    print("identities hold:", report.passed)
    print(report.to_dict())


def main():
    logging.basicConfig(level=logging.INFO)
    base = tempfile.mkdtemp()

    sample_relaxation(os.path.join(base, 'relaxation'))
    sample_vortex(os.path.join(base, 'vortex'))
    sample_lemmas()

    print("output in", base)


if __name__ == '__main__':
    main()
