#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import collections
import io
import logging

import numpy as np

from .exceptions import LocationError, MeshError

__all__ = ['Rectangle', 'UNIT_SQUARE', 'Mesh', 'build_structured_mesh', 'barycentric_refine', 'locate_point',
           'locate_points', 'read_mesh', 'write_mesh', 'perturb_mesh']

logger = logging.getLogger(__name__)

Rectangle = collections.namedtuple('Rectangle', ['x0', 'y0', 'x1', 'y1'])
UNIT_SQUARE = Rectangle(0.0, 0.0, 1.0, 1.0)

LOCATE_TOL = 1e-12
CLAMP_TOL = 1e-10


class Mesh(object):
    """ Conforming counterclockwise triangulation with edge bookkeeping.

    Local edge ``i`` of a triangle is the edge opposite its vertex ``i``. Every
    edge stores its left element (lower index) and right element (higher index,
    -1 on the boundary); the edge vertex pair is ordered counterclockwise with
    respect to the left element and the fixed normal points out of it.

    :type vertices: array_like
    :param vertices: (NV, 2) coordinates

    :type triangles: array_like
    :param triangles: (NT, 3) vertex indices, counterclockwise

    :type macro_parent: array_like
    :param macro_parent: optional (NT,) index of the macro triangle each element was split from
    """

    def __init__(self, vertices, triangles, macro_parent=None):
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        self.macro_parent = None if macro_parent is None else np.asarray(macro_parent, dtype=np.int64)

        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            raise MeshError(u'vertices must be an (NV, 2) array')
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3 or len(self.triangles) == 0:
            raise MeshError(u'triangles must be a non-empty (NT, 3) array')
        if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
            raise MeshError(u'triangle references a vertex out of range')
        if self.macro_parent is not None and self.macro_parent.shape != (len(self.triangles),):
            raise MeshError(u'macro_parent must have one entry per triangle')

        self._build_geometry()
        self._build_edges()

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def internal_edges(self):
        return np.flatnonzero(self.edge_elements[:, 1] >= 0)

    @property
    def is_macro_refined(self):
        return self.macro_parent is not None

    def _build_geometry(self):
        xy = self.vertices[self.triangles]
        e1 = xy[:, 1] - xy[:, 0]
        e2 = xy[:, 2] - xy[:, 0]
        self.areas = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
        bad = np.flatnonzero(self.areas <= 0.0)
        if len(bad):
            raise MeshError(u'triangle {0} has non-positive signed area {1:.3e}'.format(
                int(bad[0]), float(self.areas[bad[0]])))

        self.barycenters = xy.mean(axis=1)
        nxt = xy[:, [1, 2, 0]]
        prv = xy[:, [2, 0, 1]]
        # grad lambda_i = (y_{i+1} - y_{i+2}, x_{i+2} - x_{i+1}) / (2 |K|)
        grads = np.empty((self.n_triangles, 3, 2))
        grads[:, :, 0] = nxt[:, :, 1] - prv[:, :, 1]
        grads[:, :, 1] = prv[:, :, 0] - nxt[:, :, 0]
        self.bary_grads = grads / (2.0 * self.areas)[:, None, None]
        lengths = np.linalg.norm(prv - nxt, axis=2)
        self.diameters = lengths.max(axis=1)
        self.h = float(self.diameters.max())

    def _build_edges(self):
        tris = self.triangles
        nt = self.n_triangles
        # local edge i = (v_{i+1}, v_{i+2}), counterclockwise in its triangle
        directed = np.stack([tris[:, [1, 2, 0]], tris[:, [2, 0, 1]]], axis=2).reshape(-1, 2)
        keys = np.sort(directed, axis=1)
        unique, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
        if np.any(counts > 2):
            bad = unique[np.argmax(counts)]
            raise MeshError(u'edge ({0}, {1}) is shared by more than two triangles'.format(bad[0], bad[1]))

        ne = len(unique)
        owner = np.repeat(np.arange(nt), 3)
        local = np.tile(np.arange(3), nt)
        order = np.lexsort((owner, inverse))
        first = np.ones(len(order), dtype=bool)
        first[1:] = inverse[order][1:] != inverse[order][:-1]

        self.edge_elements = -np.ones((ne, 2), dtype=np.int64)
        self.edge_local = -np.ones((ne, 2), dtype=np.int64)
        self.edges = np.empty((ne, 2), dtype=np.int64)
        left_rows = order[first]
        right_rows = order[~first]
        self.edge_elements[inverse[left_rows], 0] = owner[left_rows]
        self.edge_local[inverse[left_rows], 0] = local[left_rows]
        self.edges[inverse[left_rows]] = directed[left_rows]
        self.edge_elements[inverse[right_rows], 1] = owner[right_rows]
        self.edge_local[inverse[right_rows], 1] = local[right_rows]

        same_direction = np.all(directed[right_rows] == self.edges[inverse[right_rows]], axis=1)
        if np.any(same_direction):
            raise MeshError(u'inconsistent orientation across edge {0}'.format(int(inverse[right_rows][same_direction][0])))

        self.tri_edges = inverse.reshape(nt, 3)
        self.tri_edge_signs = np.where(self.edge_elements[self.tri_edges, 0] == np.arange(nt)[:, None], 1.0, -1.0)
        other = np.where(self.tri_edge_signs > 0, self.edge_elements[self.tri_edges, 1],
                         self.edge_elements[self.tri_edges, 0])
        self.neighbors = other

        a = self.vertices[self.edges[:, 0]]
        b = self.vertices[self.edges[:, 1]]
        tangent = b - a
        self.edge_lengths = np.linalg.norm(tangent, axis=1)
        self.edge_normals = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1) / self.edge_lengths[:, None]
        self.edge_midpoints = 0.5 * (a + b)

        self.boundary_edges = self.edge_elements[:, 1] < 0
        self.boundary_vertices = np.zeros(self.n_vertices, dtype=bool)
        self.boundary_vertices[self.edges[self.boundary_edges].ravel()] = True
        self.vertex_element = np.full(self.n_vertices, -1, dtype=np.int64)
        self.vertex_element[tris[::-1].ravel()] = np.repeat(np.arange(nt)[::-1], 3)
        if np.any(self.vertex_element < 0):
            raise MeshError(u'mesh has vertices that belong to no triangle')

    def barycentric(self, k, x):
        """barycentric coordinates of x with respect to triangle k"""
        return 1.0 / 3.0 + self.bary_grads[k] @ (np.asarray(x, dtype=float) - self.barycenters[k])

    def barycentric_all(self, x):
        return 1.0 / 3.0 + np.einsum('kij,kj->ki', self.bary_grads, np.asarray(x, dtype=float) - self.barycenters)

    def to_physical(self, k, bary):
        """map barycentric coordinates (..., 3) of triangle(s) k to physical points"""
        return np.einsum('...i,...ij->...j', bary, self.vertices[self.triangles[k]])

    def edge_barycentric(self, e, side, t):
        """ barycentric coordinates of the edge points (1 - t) a + t b inside the element on ``side``

        :type e: array_like
        :param e: edge indices, shape (n,)

        :type side: int
        :param side: 0 for the left element, 1 for the right element

        :type t: array_like
        :param t: edge parameters in [0, 1], shape (q,)

        :return: (elements (n,), barycentric (n, q, 3))
        """
        e = np.atleast_1d(np.asarray(e, dtype=np.int64))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = self.edge_elements[e, side]
        if np.any(k < 0):
            raise MeshError(u'edge has no element on side {0}'.format(side))
        li = self.edge_local[e, side]
        rows = np.arange(len(e))
        ia = (li + 1) % 3
        ib = (li + 2) % 3
        flipped = self.triangles[k, ia] != self.edges[e, 0]
        ia, ib = np.where(flipped, ib, ia), np.where(flipped, ia, ib)
        bary = np.zeros((len(e), len(t), 3))
        bary[rows, :, ia] = 1.0 - t[None, :]
        bary[rows, :, ib] = t[None, :]
        return k, bary

    def closest_boundary_point(self, x):
        x = np.asarray(x, dtype=float)
        ids = np.flatnonzero(self.boundary_edges)
        a = self.vertices[self.edges[ids, 0]]
        b = self.vertices[self.edges[ids, 1]]
        d = b - a
        t = np.clip(np.einsum('ij,ij->i', x - a, d) / np.einsum('ij,ij->i', d, d), 0.0, 1.0)
        p = a + t[:, None] * d
        dist = np.linalg.norm(p - x, axis=1)
        j = int(np.argmin(dist))
        return p[j], float(dist[j])


def build_structured_mesh(nx, ny, domain=UNIT_SQUARE):
    """ structured triangulation of a rectangle, each cell split along its rising diagonal

    :type nx: int
    :param nx: cells in x

    :type ny: int
    :param ny: cells in y

    :type domain: Rectangle
    :param domain: (x0, y0, x1, y1)

    :return: Mesh with 2 * nx * ny triangles
    """
    nx, ny = int(nx), int(ny)
    if nx < 1 or ny < 1:
        raise MeshError(u'structured mesh needs nx, ny >= 1, got {0}x{1}'.format(nx, ny))
    x0, y0, x1, y1 = (float(v) for v in domain)
    if not (x1 > x0 and y1 > y0):
        raise MeshError(u'degenerate rectangle {0}'.format(tuple(domain)))

    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.stack([gx.ravel(), gy.ravel()], axis=1)

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    v00 = (j * (nx + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + nx + 1
    v11 = v01 + 1
    lower = np.stack([v00, v10, v11], axis=1)
    upper = np.stack([v00, v11, v01], axis=1)
    triangles = np.stack([lower, upper], axis=1).reshape(-1, 3)
    return Mesh(vertices, triangles)


def barycentric_refine(m):
    """ split every triangle into three around its barycenter

    Children of triangle k are (v0, v1, c), (v1, v2, c), (v2, v0, c) with c the
    new vertex n_vertices + k; macro_parent of each child is k.
    """
    nv = m.n_vertices
    centre = nv + np.arange(m.n_triangles)
    t = m.triangles
    children = np.stack([np.stack([t[:, 0], t[:, 1], centre], axis=1),
                         np.stack([t[:, 1], t[:, 2], centre], axis=1),
                         np.stack([t[:, 2], t[:, 0], centre], axis=1)], axis=1).reshape(-1, 3)
    vertices = np.concatenate([m.vertices, m.barycenters], axis=0)
    return Mesh(vertices, children, macro_parent=np.repeat(np.arange(m.n_triangles), 3))


def locate_point(m, x, hint=0, tol=LOCATE_TOL, clamp=CLAMP_TOL):
    """ find a triangle containing x

    Walks across the edge with the most negative barycentric coordinate starting
    from ``hint`` and falls back to an exhaustive scan. Points at most ``clamp``
    outside the domain are moved onto the boundary.

    :return: (element, barycentric coordinates)
    :raise LocationError: x lies further than ``clamp`` outside the domain
    """
    x = np.asarray(x, dtype=float)
    k = int(hint) if 0 <= hint < m.n_triangles else 0
    for _ in range(m.n_triangles + 3):
        bary = m.barycentric(k, x)
        i = int(np.argmin(bary))
        if bary[i] >= -tol:
            return k, bary
        nb = int(m.neighbors[k, i])
        if nb < 0:
            break
        k = nb

    bary_all = m.barycentric_all(x)
    worst = bary_all.min(axis=1)
    k = int(np.argmax(worst))
    if worst[k] >= -tol:
        return k, bary_all[k]

    projected, distance = m.closest_boundary_point(x)
    if distance > clamp:
        raise LocationError(x, distance)
    bary_all = m.barycentric_all(projected)
    k = int(np.argmax(bary_all.min(axis=1)))
    bary = np.clip(bary_all[k], 0.0, None)
    return k, bary / bary.sum()


def locate_points(m, xs, hints=None):
    """locate_point over an (n, 2) array; returns (elements (n,), barycentric (n, 3))"""
    xs = np.asarray(xs, dtype=float)
    elements = np.empty(len(xs), dtype=np.int64)
    bary = np.empty((len(xs), 3))
    for p, x in enumerate(xs):
        hint = 0 if hints is None else int(hints[p])
        elements[p], bary[p] = locate_point(m, x, hint)
    return elements, bary


def read_mesh(path):
    """ read the ASCII mesh format

    line 1: "NV NT"; then NV lines "x y"; then NT lines "i j k" (0-based)
    """
    try:
        with io.open(path, 'r', encoding='utf-8') as f:
            rows = [line.split() for line in f if line.strip() and not line.lstrip().startswith('#')]
    except (IOError, OSError) as ex:
        raise MeshError(u'cannot read mesh file: {0}'.format(ex), path=path)

    try:
        nv, nt = int(rows[0][0]), int(rows[0][1])
        if len(rows) != 1 + nv + nt:
            raise ValueError(u'expected {0} data lines, found {1}'.format(nv + nt, len(rows) - 1))
        vertices = np.array([[float(r[0]), float(r[1])] for r in rows[1:1 + nv]])
        triangles = np.array([[int(r[0]), int(r[1]), int(r[2])] for r in rows[1 + nv:]], dtype=np.int64)
    except (IndexError, ValueError) as ex:
        raise MeshError(u'malformed mesh file: {0}'.format(ex), path=path)

    logger.info(u"read mesh {0}: {1} vertices, {2} triangles".format(path, nv, nt))
    return Mesh(vertices, triangles.reshape(-1, 3))


def write_mesh(m, path):
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(u'{0} {1}\n'.format(m.n_vertices, m.n_triangles))
        for x, y in m.vertices:
            f.write(u'{0!r} {1!r}\n'.format(float(x), float(y)))
        for i, j, k in m.triangles:
            f.write(u'{0} {1} {2}\n'.format(i, j, k))


def perturb_mesh(m, amplitude=0.2, seed=0):
    """ jitter interior vertices by up to ``amplitude`` times the shortest edge length

    The result keeps the connectivity and macro structure of ``m``.
    """
    rng = np.random.default_rng(seed)
    shift = rng.uniform(-1.0, 1.0, size=m.vertices.shape) * amplitude * float(m.edge_lengths.min())
    shift[m.boundary_vertices] = 0.0
    return Mesh(m.vertices + shift, m.triangles, macro_parent=m.macro_parent)
