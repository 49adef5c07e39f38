#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Symmetric 2x2 matrix algebra.

Symmetric matrices are stored packed as arrays of shape ``(..., 3)`` holding
``(a11, a12, a22)``; general 2x2 matrices (velocity gradients) are plain
``(..., 2, 2)`` arrays with ``g[..., i, j] = d u_i / d x_j``. Every function
broadcasts over the leading axes.
"""

import collections
import logging

import numpy as np

from .exceptions import DomainError, MatrixOverflowError

__all__ = ['GradDecomposition', 'PairInequalityReport', 'IDENTITY', 'to_full', 'from_full', 'trace',
           'double_dot', 'contract', 'sym_eig', 'sym_funcm', 'sym_funcm_frechet', 'check_spd', 'spd_inv',
           'spd_log', 'spd_exp', 'entropy_terms', 'verify_pair_inequalities', 'upper_convected',
           'upper_convected_matrix', 'decompose_gradient', 'reconstruct_gradient', 'log_convection',
           'commutator_norm', 'jacobi_check', 'random_spd', 'random_sym']

logger = logging.getLogger(__name__)

IDENTITY = np.array([1.0, 0.0, 1.0])

SPD_THRESHOLD = 1e-14
EXP_LIMIT = 709.0
DEFAULT_DEGENERACY_TOL = 1e-10

GradDecomposition = collections.namedtuple('GradDecomposition', ['omega', 'b', 'n'])
GradDecomposition.__doc__ = """g = Omega + B + N s^-1 with Omega = [[0, omega], [-omega, 0]],
B packed symmetric commuting with s, N = [[0, n], [-n, 0]]"""

PairInequalityReport = collections.namedtuple('PairInequalityReport',
                                              ['trace_product', 'log_det', 'entropy', 'log_det_identity',
                                               'scale'])
PairInequalityReport.__doc__ = """Slacks of the trace inequalities for a pair (s, t).

trace_product: tr(st) (must be >= 0)
log_det: tr(s t^-1 - I) - tr(ln s - ln t) (must be >= 0)
entropy: tr((ln s - ln t) s) - tr(s - t) (must be >= 0)
log_det_identity: |ln det(s t^-1) - tr(ln s - ln t)|
scale: magnitude of the compared terms, for relative comparisons
"""


def _packed(s):
    s = np.asarray(s, dtype=float)
    if s.shape[-1] != 3:
        raise ValueError('packed symmetric matrices need a trailing axis of length 3, got {0}'.format(s.shape))
    return s


def to_full(s):
    s = _packed(s)
    out = np.empty(s.shape[:-1] + (2, 2))
    out[..., 0, 0] = s[..., 0]
    out[..., 0, 1] = s[..., 1]
    out[..., 1, 0] = s[..., 1]
    out[..., 1, 1] = s[..., 2]
    return out


def from_full(m):
    """packed symmetric part of a full 2x2 matrix"""
    m = np.asarray(m, dtype=float)
    return np.stack([m[..., 0, 0], 0.5 * (m[..., 0, 1] + m[..., 1, 0]), m[..., 1, 1]], axis=-1)


def trace(s):
    s = _packed(s)
    return s[..., 0] + s[..., 2]


def double_dot(x, y):
    """x:y for packed symmetric x and y"""
    x = _packed(x)
    y = _packed(y)
    return x[..., 0] * y[..., 0] + 2.0 * x[..., 1] * y[..., 1] + x[..., 2] * y[..., 2]


def contract(g):
    """coefficients c such that X:g = c . packed(X) for every symmetric X"""
    g = np.asarray(g, dtype=float)
    return np.stack([g[..., 0, 0], g[..., 0, 1] + g[..., 1, 0], g[..., 1, 1]], axis=-1)


def sym_eig(s):
    """ closed form eigendecomposition of packed symmetric matrices

    :type s: array_like
    :param s: packed matrices, shape (..., 3)

    :return: (values, rotation) with values[..., 0] >= values[..., 1] and
        rotation[..., :, i] the eigenvector of values[..., i]; rotation is a proper rotation.
    """
    s = _packed(s)
    a, b, c = s[..., 0], s[..., 1], s[..., 2]
    mean = 0.5 * (a + c)
    radius = np.hypot(0.5 * (a - c), b)
    values = np.stack([mean + radius, mean - radius], axis=-1)

    theta = 0.5 * np.arctan2(2.0 * b, a - c)
    cos, sin = np.cos(theta), np.sin(theta)
    rotation = np.empty(s.shape[:-1] + (2, 2))
    rotation[..., 0, 0] = cos
    rotation[..., 1, 0] = sin
    rotation[..., 0, 1] = -sin
    rotation[..., 1, 1] = cos
    return values, rotation


def _from_eig(f1, f2, rotation):
    cos, sin = rotation[..., 0, 0], rotation[..., 1, 0]
    return np.stack([f1 * cos * cos + f2 * sin * sin,
                     (f1 - f2) * cos * sin,
                     f1 * sin * sin + f2 * cos * cos], axis=-1)


def sym_funcm(s, f):
    """f(s) = R diag(f(l1), f(l2)) R^T for a scalar function f"""
    values, rotation = sym_eig(s)
    return _from_eig(f(values[..., 0]), f(values[..., 1]), rotation)


def sym_funcm_frechet(s, f, fprime, close_tol=1e-8):
    """ Frechet derivative of X -> f(X) at s, in packed coordinates

    Daleckii-Krein formula: Df(s)[H] = R (F o (R^T H R)) R^T with F the matrix of
    first divided differences of f on the spectrum of s.

    :return: array (..., 3, 3), J such that packed(Df(s)[H]) = J @ packed(H)
    """
    values, rotation = sym_eig(s)
    l1, l2 = values[..., 0], values[..., 1]
    d1, d2 = fprime(l1), fprime(l2)
    gap = l1 - l2
    close = gap <= close_tol * (1.0 + np.abs(l1) + np.abs(l2))
    safe_gap = np.where(close, 1.0, gap)
    divided = np.where(close, fprime(0.5 * (l1 + l2)), (f(l1) - f(l2)) / safe_gap)

    weights = np.empty(values.shape[:-1] + (2, 2))
    weights[..., 0, 0] = d1
    weights[..., 1, 1] = d2
    weights[..., 0, 1] = divided
    weights[..., 1, 0] = divided

    rt = np.swapaxes(rotation, -1, -2)
    columns = []
    for direction in (np.array([[1.0, 0.0], [0.0, 0.0]]),
                      np.array([[0.0, 1.0], [1.0, 0.0]]),
                      np.array([[0.0, 0.0], [0.0, 1.0]])):
        local = rt @ direction @ rotation
        columns.append(from_full(rotation @ (weights * local) @ rt))
    return np.stack(columns, axis=-1)


def check_spd(s, threshold=SPD_THRESHOLD):
    """ check positive definiteness of packed matrices

    An eigenvalue counts as positive when it exceeds threshold * (1 + spectral radius).

    :return: smallest eigenvalue (array over the leading axes)
    :raise DomainError: naming the offending eigenvalue and flat index
    """
    s = _packed(s)
    values, _ = sym_eig(s)
    smallest = values[..., 1]
    radius = np.maximum(np.abs(values[..., 0]), np.abs(values[..., 1]))
    bad = ~(smallest > threshold * (1.0 + radius))
    if np.any(bad):
        index = int(np.flatnonzero(bad.ravel())[0]) if np.ndim(bad) else 0
        value = float(np.ravel(smallest)[index])
        raise DomainError(u'matrix is not symmetric positive definite: eigenvalue {0:.6e}'.format(value),
                          eigenvalue=value, index=index)
    return smallest


def spd_inv(s):
    check_spd(s)
    s = _packed(s)
    det = s[..., 0] * s[..., 2] - s[..., 1] * s[..., 1]
    return np.stack([s[..., 2], -s[..., 1], s[..., 0]], axis=-1) / det[..., None]


def spd_log(s):
    check_spd(s)
    return sym_funcm(s, np.log)


def spd_exp(s):
    s = _packed(s)
    values, rotation = sym_eig(s)
    if not np.all(np.isfinite(values)) or np.any(values[..., 0] > EXP_LIMIT):
        raise MatrixOverflowError(u'matrix exponential overflows: largest eigenvalue {0}'.format(
            float(np.nanmax(values[..., 0]))))
    return _from_eig(np.exp(values[..., 0]), np.exp(values[..., 1]), rotation)


def entropy_terms(s):
    """ (tr(s - ln s - I), tr(s + s^-1 - 2I)) evaluated on the spectrum of s """
    check_spd(s)
    values, _ = sym_eig(s)
    first = np.sum(values - np.log(values) - 1.0, axis=-1)
    second = np.sum(values + 1.0 / values - 2.0, axis=-1)
    return first, second


def verify_pair_inequalities(s, t):
    """ slacks of the trace inequalities between two SPD matrices

    :return: PairInequalityReport, every slack field is >= 0 up to roundoff
    """
    s = _packed(s)
    t = _packed(t)
    check_spd(s)
    check_spd(t)
    log_s = sym_funcm(s, np.log)
    log_t = sym_funcm(t, np.log)
    t_inv = spd_inv(t)

    trace_product = double_dot(s, t)
    lhs = double_dot(s, t_inv) - 2.0
    log_trace = trace(log_s) - trace(log_t)
    det_ratio = (s[..., 0] * s[..., 2] - s[..., 1] ** 2) / (t[..., 0] * t[..., 2] - t[..., 1] ** 2)
    entropy_lhs = double_dot(log_s - log_t, s)
    entropy_rhs = trace(s) - trace(t)

    scale = np.abs(lhs) + np.abs(log_trace) + np.abs(entropy_lhs) + np.abs(entropy_rhs) + 1.0
    return PairInequalityReport(trace_product=trace_product,
                                log_det=lhs - log_trace,
                                entropy=entropy_lhs - entropy_rhs,
                                log_det_identity=np.abs(np.log(det_ratio) - log_trace),
                                scale=scale)


def upper_convected(g, s):
    """packed(g s + s g^T)"""
    return np.einsum('...ij,...j->...i', upper_convected_matrix(g), _packed(s))


def upper_convected_matrix(g):
    """3x3 matrix L(g) with L(g) @ packed(s) = packed(g s + s g^T)"""
    g = np.asarray(g, dtype=float)
    g11, g12, g21, g22 = g[..., 0, 0], g[..., 0, 1], g[..., 1, 0], g[..., 1, 1]
    zero = np.zeros_like(g11)
    return np.stack([np.stack([2.0 * g11, 2.0 * g12, zero], axis=-1),
                     np.stack([g21, g11 + g22, g12], axis=-1),
                     np.stack([zero, 2.0 * g21, 2.0 * g22], axis=-1)], axis=-2)


def _degenerate(values, tol):
    radius = np.maximum(np.abs(values[..., 0]), np.abs(values[..., 1]))
    return (values[..., 0] - values[..., 1]) <= tol * radius


def decompose_gradient(g, s, degeneracy_tol=DEFAULT_DEGENERACY_TOL):
    """ split g = Omega + B + N s^-1 with B commuting with the SPD matrix s

    In the eigenbasis of s, B is the diagonal part of g and the antisymmetric
    pair (Omega, N) absorbs the off-diagonal part. When the relative eigenvalue
    gap of s is below degeneracy_tol the split Omega = antisym(g), B = sym(g),
    N = 0 is returned.

    :type g: array_like
    :param g: velocity gradients, shape (..., 2, 2)

    :type s: array_like
    :param s: packed SPD matrices, shape (..., 3)

    :return: GradDecomposition
    """
    g = np.asarray(g, dtype=float)
    check_spd(s)
    values, rotation = sym_eig(s)
    values, rotation = np.broadcast_to(values, g.shape[:-2] + (2,)), np.broadcast_to(rotation, g.shape)
    rt = np.swapaxes(rotation, -1, -2)
    local = rt @ g @ rotation
    s1, s2 = values[..., 0], values[..., 1]

    degenerate = _degenerate(values, degeneracy_tol)
    gap = np.where(degenerate, 1.0, s1 - s2)
    n = np.where(degenerate, 0.0, (local[..., 0, 1] + local[..., 1, 0]) * s1 * s2 / gap)
    omega = np.where(degenerate, 0.5 * (g[..., 0, 1] - g[..., 1, 0]), local[..., 0, 1] - n / s2)

    b_local = np.zeros_like(local)
    b_local[..., 0, 0] = local[..., 0, 0]
    b_local[..., 1, 1] = local[..., 1, 1]
    b = np.where(degenerate[..., None], from_full(g), from_full(rotation @ b_local @ rt))
    return GradDecomposition(omega=omega, b=b, n=n)


def _antisym(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape + (2, 2))
    out[..., 0, 1] = w
    out[..., 1, 0] = -w
    return out


def reconstruct_gradient(decomposition, s):
    """Omega + B + N s^-1 as full matrices"""
    s_inv = to_full(spd_inv(s))
    return _antisym(decomposition.omega) + to_full(decomposition.b) + _antisym(decomposition.n) @ s_inv


def log_convection(g, psi, degeneracy_tol=DEFAULT_DEGENERACY_TOL):
    """ packed(Omega psi - psi Omega + 2 B) for the decomposition of g against e^psi

    Evaluated in the eigenbasis of psi where the off-diagonal entry is
    (g12 s2 + g21 s1) (ln s1 - ln s2) / (s1 - s2), s = e^psi. The divided
    difference is taken in a form that stays exact as s1 -> s2, so the result
    is continuous across the degenerate branch of decompose_gradient and
    always satisfies R:e^psi = 2 g:e^psi and tr R = 2 tr g.

    Linear in g for fixed psi.
    """
    g = np.asarray(g, dtype=float)
    psi = _packed(psi)
    values, rotation = sym_eig(psi)
    shape = np.broadcast_shapes(g.shape[:-2], psi.shape[:-1])
    values = np.broadcast_to(values, shape + (2,))
    rotation = np.broadcast_to(rotation, shape + (2, 2))
    g = np.broadcast_to(g, shape + (2, 2))
    rt = np.swapaxes(rotation, -1, -2)
    local = rt @ g @ rotation

    p1, p2 = values[..., 0], values[..., 1]
    delta = p1 - p2
    # (p1 - p2) / (e^p1 - e^p2) = e^-p2 * delta / expm1(delta)
    safe = np.where(delta > 0.0, delta, 1.0)
    ratio = np.where(delta > 0.0, safe / np.expm1(safe), 1.0) * np.exp(-p2)
    off = (local[..., 0, 1] * np.exp(p2) + local[..., 1, 0] * np.exp(p1)) * ratio

    degenerate = _degenerate(np.exp(values), degeneracy_tol)
    off = np.where(degenerate, local[..., 0, 1] + local[..., 1, 0], off)

    result_local = np.empty_like(local)
    result_local[..., 0, 0] = 2.0 * local[..., 0, 0]
    result_local[..., 1, 1] = 2.0 * local[..., 1, 1]
    result_local[..., 0, 1] = off
    result_local[..., 1, 0] = off
    return from_full(rotation @ result_local @ rt)


def commutator_norm(b, s):
    """Frobenius norm of b s - s b for packed symmetric b, s"""
    b = _packed(b)
    s = _packed(s)
    off = b[..., 0] * s[..., 1] + b[..., 1] * s[..., 2] - s[..., 0] * b[..., 1] - s[..., 1] * b[..., 2]
    return np.sqrt(2.0) * np.abs(off)


def jacobi_check(path, t0, h):
    """ finite difference replay of the Jacobi formulas along an SPD path

    :type path: callable
    :param path: t -> packed SPD matrix

    :return: (|FD (tr ln s)' - s' : s^-1|, |FD (tr s)' - (ln s)' : s|) at t0,
        every derivative taken by central differences with step h
    """
    if h <= 0:
        raise ValueError('h must be positive')
    minus, centre, plus = (_packed(path(t)) for t in (t0 - h, t0, t0 + h))
    for s in (minus, centre, plus):
        check_spd(s)

    log_minus, log_plus = sym_funcm(minus, np.log), sym_funcm(plus, np.log)
    d_sigma = (plus - minus) / (2.0 * h)
    d_log = (log_plus - log_minus) / (2.0 * h)

    d_trace_log = (trace(log_plus) - trace(log_minus)) / (2.0 * h)
    d_trace = (trace(plus) - trace(minus)) / (2.0 * h)

    first = np.abs(d_trace_log - double_dot(d_sigma, spd_inv(centre)))
    second = np.abs(d_trace - double_dot(d_log, centre))
    return float(np.max(first)), float(np.max(second))


def random_spd(rng, size, max_log10_cond=6.0):
    """random packed SPD matrices with condition numbers up to 10**max_log10_cond"""
    exponents = rng.uniform(-0.5 * max_log10_cond, 0.5 * max_log10_cond, size=(size, 2))
    theta = rng.uniform(0.0, np.pi, size=size)
    rotation = np.empty((size, 2, 2))
    rotation[:, 0, 0] = np.cos(theta)
    rotation[:, 1, 0] = np.sin(theta)
    rotation[:, 0, 1] = -np.sin(theta)
    rotation[:, 1, 1] = np.cos(theta)
    return _from_eig(10.0 ** exponents[:, 0], 10.0 ** exponents[:, 1], rotation)


def random_sym(rng, size, bound=3.0):
    """random packed symmetric matrices with entries in [-bound, bound]"""
    return rng.uniform(-bound, bound, size=(size, 3))
