#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.


import unittest

import numpy as np
from numpy.testing import assert_allclose

from oldroyd.diagnostics.initial_conditions import InitialCondition, InitialKind, initial_state, vortex_velocity
from oldroyd.exceptions import ContractViolationError, TransportError
from oldroyd.mesh import barycentric_refine, build_structured_mesh, perturb_mesh
from oldroyd.projections import ProjectedVelocity, Representation, project_bdm, project_rot, project_rt0
from oldroyd.schemes import Discretization, SchemeConfig
from oldroyd.spaces import P2_VECTOR, FEField
from oldroyd.transport import (AnalyticVelocity, boundary_flux_integral, build_edge_upwind, clip_polygon,
                               integrate_backward_flow, polygon_area, remap_cell_averages, upwind_jump_integral,
                               REMAP_BALANCE_TOL)


def _rotation(x):
    return np.stack([-(x[:, 1] - 0.5), x[:, 0] - 0.5], axis=1)


def _vertex_bary(m, vertices):
    """barycentric coordinates of every vertex in m.vertex_element"""
    return (m.triangles[m.vertex_element[vertices]] == vertices[:, None]).astype(float)


class TestBackwardFlow(unittest.TestCase):

    def setUp(self):
        self.m = build_structured_mesh(4, 4)

    def test_constant_velocity(self):
        u = AnalyticVelocity(self.m, lambda x: np.tile([0.1, -0.05], (len(x), 1)))
        points = np.array([[0.5, 0.5], [0.3, 0.7]])
        feet = integrate_backward_flow(self.m, u, points, 0.5)
        assert_allclose(feet.feet, points - 0.5 * np.array([0.1, -0.05]), atol=1e-15)
        assert_allclose(self.m.to_physical(feet.elements[:, None], feet.bary[:, None])[:, 0], feet.feet, atol=1e-14)

    def test_rotation(self):
        u = AnalyticVelocity(self.m, _rotation)
        points = np.array([[0.7, 0.5], [0.5, 0.3]])
        dt = 0.1
        feet = integrate_backward_flow(self.m, u, points, dt, substeps=4)
        c, s = np.cos(-dt), np.sin(-dt)
        rel = points - 0.5
        exact = 0.5 + np.stack([c * rel[:, 0] - s * rel[:, 1], s * rel[:, 0] + c * rel[:, 1]], axis=1)
        assert_allclose(feet.feet, exact, atol=1e-9)

    def test_pinned_points_stay(self):
        u = AnalyticVelocity(self.m, _rotation)
        points = np.array([[0.0, 0.5], [0.5, 0.5]])
        feet = integrate_backward_flow(self.m, u, points, 0.1, pinned=np.array([True, False]))
        assert_allclose(feet.feet[0], points[0])

    def test_pinned_vertices_with_tangential_boundary_velocity(self):
        m = barycentric_refine(build_structured_mesh(4, 4))
        boundary = m.boundary_vertices
        vertices = np.flatnonzero(boundary)
        for projected in (project_rot(m, vortex_velocity(m)),
                          project_bdm(m, vortex_velocity(m), no_flux_boundary=True)):
            speeds = np.linalg.norm(projected.values(m.vertex_element[vertices], _vertex_bary(m, vertices)), axis=1)
            self.assertGreater(speeds.max(), 1e-3)
            feet = integrate_backward_flow(m, projected, m.vertices, 0.01, hints=m.vertex_element, pinned=boundary)
            assert_allclose(feet.feet[boundary], m.vertices[boundary], atol=0.0)
            moved = np.linalg.norm(feet.feet[~boundary] - m.vertices[~boundary], axis=1)
            self.assertGreater(moved.max(), 0.0)

    def test_pinned_points_are_never_evaluated(self):
        m = build_structured_mesh(2, 2)
        calls = []

        def fn(x):
            calls.append(x.copy())
            return np.tile([1.0, 0.0], (len(x), 1))

        points = np.array([[0.0, 0.5], [0.5, 0.5]])
        feet = integrate_backward_flow(m, AnalyticVelocity(m, fn), points, 0.1, pinned=np.array([True, False]))
        assert_allclose(feet.feet, [[0.0, 0.5], [0.4, 0.5]], atol=1e-15)
        self.assertTrue(all(len(x) == 1 for x in calls))

    def test_leaving_the_domain(self):
        u = AnalyticVelocity(self.m, lambda x: np.tile([1.0, 0.0], (len(x), 1)))
        with self.assertRaises(TransportError) as ctx:
            integrate_backward_flow(self.m, u, np.array([[0.05, 0.5]]), 0.5)
        self.assertEqual(ctx.exception.get_error_code(), 'CharacteristicLeftDomain')

    def test_invalid_arguments(self):
        u = AnalyticVelocity(self.m, _rotation)
        self.assertRaises(ValueError, integrate_backward_flow, self.m, u, np.zeros((1, 2)), 0.0)
        self.assertRaises(ValueError, integrate_backward_flow, self.m, u, np.zeros((1, 2)), 0.1, 0)


class TestUpwind(unittest.TestCase):

    def test_jump_identity_on_random_triples(self):
        for seed in range(100):
            rng = np.random.RandomState(seed)
            m = perturb_mesh(build_structured_mesh(3, 3), amplitude=0.2, seed=seed)
            u = FEField(m, P2_VECTOR, rng.normal(size=(m.n_vertices + m.n_edges, 2)))
            projected = project_rt0(m, u, no_flux_boundary=True)
            values = rng.normal(size=(m.n_triangles, 3))
            upwind = build_edge_upwind(m, projected)
            assert_allclose(upwind_jump_integral(upwind, values), boundary_flux_integral(m, projected, values),
                            atol=1e-12)

    def test_downstream_is_entered_by_the_flow(self):
        m = build_structured_mesh(3, 3)
        projected = project_rt0(m, lambda x: np.tile([1.0, 0.0], (len(x), 1)))
        upwind = build_edge_upwind(m, projected)
        moving = np.abs(upwind.un) > 1e-12
        entered = m.barycenters[upwind.downstream][..., 0] - m.barycenters[upwind.upstream][..., 0]
        self.assertTrue(np.all(entered[moving] > 0.0))

    def test_multivalued_normal_trace(self):
        m = build_structured_mesh(2, 2)
        rng = np.random.RandomState(0)
        broken = ProjectedVelocity(m, Representation.RT0, None, rng.normal(size=(m.n_triangles, 2)),
                                   np.zeros((m.n_triangles, 2, 2)))
        with self.assertRaises(ContractViolationError) as ctx:
            build_edge_upwind(m, broken)
        self.assertEqual(ctx.exception.get_error_code(), 'MultivaluedNormalTrace')


class TestRemap(unittest.TestCase):

    def setUp(self):
        self.m = build_structured_mesh(6, 6)
        u = AnalyticVelocity(self.m, lambda x: 0.5 * np.sin(np.pi * x) ** 2 * _rotation(x))
        self.feet = integrate_backward_flow(self.m, u, self.m.vertices, 0.1, hints=self.m.vertex_element,
                                            pinned=self.m.boundary_vertices)

    def test_identity_map(self):
        values = np.arange(self.m.n_triangles, dtype=float)
        averages, report = remap_cell_averages(self.m, self.m.vertices, values)
        assert_allclose(averages, values)
        self.assertTrue(report.identity)
        self.assertTrue(report.balanced)

    def test_conservation_and_bounds(self):
        rng = np.random.RandomState(4)
        values = rng.uniform(1.0, 2.0, size=(self.m.n_triangles, 3))
        averages, report = remap_cell_averages(self.m, self.feet.feet, values, foot_elements=self.feet.elements)
        self.assertFalse(report.identity)
        self.assertLess(report.balance_residual, 1e-12)
        self.assertTrue(report.balanced)
        assert_allclose(self.m.areas @ averages, self.m.areas @ values, rtol=1e-12)
        self.assertTrue(np.all(averages >= values.min(axis=0) - 1e-12))
        self.assertTrue(np.all(averages <= values.max(axis=0) + 1e-12))

    def test_constants_are_preserved(self):
        values = np.full(self.m.n_triangles, 3.0)
        averages, _ = remap_cell_averages(self.m, self.feet.feet, values)
        assert_allclose(averages, 3.0, rtol=1e-12)

    def test_folded_map(self):
        feet = self.m.vertices.copy()
        interior = np.flatnonzero(~self.m.boundary_vertices)
        feet[interior[0]] = self.m.vertices[interior[-1]]
        with self.assertRaises(TransportError) as ctx:
            remap_cell_averages(self.m, feet, np.ones(self.m.n_triangles))
        self.assertEqual(ctx.exception.get_error_code(), 'FoldedCharacteristicMesh')


class TestVortexRemap(unittest.TestCase):

    def setUp(self):
        self.m = barycentric_refine(build_structured_mesh(4, 4))
        disc = Discretization(self.m, SchemeConfig(dt=0.01))
        self.velocity = initial_state(disc, InitialCondition(InitialKind.VORTEX)).velocity

    def _feet(self, u):
        return integrate_backward_flow(self.m, u, self.m.vertices, 0.01, hints=self.m.vertex_element,
                                       pinned=self.m.boundary_vertices)

    def test_constants_survive(self):
        feet = self._feet(self.velocity)
        averages, report = remap_cell_averages(self.m, feet.feet, np.ones(self.m.n_triangles),
                                               foot_elements=feet.elements)
        assert_allclose(averages, 1.0, rtol=0.0, atol=1e-13)
        self.assertFalse(report.identity)
        self.assertGreater(report.area_defect, 0.0)
        self.assertEqual(report.balanced, report.balance_residual <= REMAP_BALANCE_TOL)

    def test_residual_bounds_the_conservation_error(self):
        feet = self._feet(self.velocity)
        values = np.random.RandomState(2).uniform(1.0, 2.0, size=(self.m.n_triangles, 3))
        averages, report = remap_cell_averages(self.m, feet.feet, values, foot_elements=feet.elements)
        self.assertTrue(np.all(averages >= values.min(axis=0) - 1e-12))
        self.assertTrue(np.all(averages <= values.max(axis=0) + 1e-12))
        error = np.abs(self.m.areas @ averages - self.m.areas @ values)
        self.assertTrue(np.all(error <= report.balance_residual * (self.m.areas @ values) + 1e-13))

    def test_unbalanced_remap_is_flagged(self):
        feet = self._feet(self.velocity)
        values = np.full((self.m.n_triangles, 3), [2.0, 0.5, 1.5])
        averages, report = remap_cell_averages(self.m, feet.feet, values, foot_elements=feet.elements, max_iters=1,
                                               balance_tol=1e-14)
        self.assertEqual(report.balance_iterations, 1)
        self.assertFalse(report.balanced)
        self.assertGreater(report.balance_residual, 1e-14)
        assert_allclose(averages, values, rtol=1e-13)

    def test_projected_flow(self):
        for projected in (project_rot(self.m, self.velocity),
                          project_rt0(self.m, self.velocity, no_flux_boundary=True)):
            feet = self._feet(projected)
            values = np.random.RandomState(5).uniform(0.5, 1.0, size=self.m.n_triangles)
            averages, report = remap_cell_averages(self.m, feet.feet, values, foot_elements=feet.elements)
            self.assertTrue(np.all(averages >= 0.5 - 1e-12))
            self.assertTrue(np.all(averages <= 1.0 + 1e-12))
            ones, _ = remap_cell_averages(self.m, feet.feet, np.ones(self.m.n_triangles), foot_elements=feet.elements)
            assert_allclose(ones, 1.0, rtol=0.0, atol=1e-13)


class TestPolygons(unittest.TestCase):

    def test_clip(self):
        square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        triangle = np.array([[0.5, -0.5], [1.5, 0.5], [0.5, 0.5]])
        overlap = clip_polygon(triangle, square)
        self.assertAlmostEqual(polygon_area(overlap), 0.25, places=14)
        self.assertAlmostEqual(polygon_area(clip_polygon(triangle + 5.0, square)), 0.0, places=14)


if __name__ == '__main__':
    unittest.main()
