#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import json

__all__ = ['SolverException', 'DomainError', 'MatrixOverflowError', 'MeshError', 'LocationError',
           'TransportError', 'ContractViolationError', 'ProjectionError', 'LinearSolverError',
           'NonConvergenceError', 'PositivityError', 'StepSizeError', 'ConfigError']


class SolverException(Exception):
    """The root exception of the solver.

    :type errorCode: string
    :param errorCode: stable error code, e.g. 'PositivityLoss'

    :type errorMessage: string
    :param errorMessage: detailed information for the exception

    :type details: dict
    :param details: extra machine readable context (element id, eigenvalue, ...)
    """

    def __init__(self, errorCode, errorMessage, details=None):
        super(SolverException, self).__init__(errorMessage)
        self._errorCode = errorCode
        self._errorMessage = errorMessage
        self._details = details or {}

    def __str__(self):
        return json.dumps({
            "errorCode": self._errorCode,
            "errorMessage": self._errorMessage,
            "details": self._details
        }, sort_keys=True, default=str)

    def get_error_code(self):
        """ return error code of exception

        :return: string, error code of exception.
        """
        return self._errorCode

    def get_error_message(self):
        """ return error message of exception

        :return: string, error message of exception.
        """
        return self._errorMessage

    def get_details(self):
        """ return the context dict of exception

        :return: dict
        """
        return self._details


class DomainError(SolverException):
    def __init__(self, message, eigenvalue=None, index=None):
        super(DomainError, self).__init__('SpdDomainError', message,
                                          {'eigenvalue': eigenvalue, 'index': index})
        self.eigenvalue = eigenvalue
        self.index = index


class MatrixOverflowError(SolverException):
    def __init__(self, message):
        super(MatrixOverflowError, self).__init__('MatrixOverflow', message)


class MeshError(SolverException):
    def __init__(self, message, path=None):
        super(MeshError, self).__init__('InvalidMesh', message, {'path': path} if path else None)


class LocationError(SolverException):
    def __init__(self, point, distance):
        msg = u'point ({0:.17g}, {1:.17g}) lies outside the domain by {2:.3e}'.format(point[0], point[1], distance)
        super(LocationError, self).__init__('PointOutsideDomain', msg, {'distance': distance})
        self.point = point
        self.distance = distance


class TransportError(SolverException):
    def __init__(self, message, code='CharacteristicLeftDomain', cause=None):
        super(TransportError, self).__init__(code, message)
        self.cause = cause


class ContractViolationError(SolverException):
    def __init__(self, edge, jump):
        msg = u'normal trace of the advecting field jumps by {0:.3e} on edge {1}'.format(jump, edge)
        super(ContractViolationError, self).__init__('MultivaluedNormalTrace', msg,
                                                     {'edge': edge, 'jump': jump})


class ProjectionError(SolverException):
    def __init__(self, message):
        super(ProjectionError, self).__init__('SingularProjection', message)


class LinearSolverError(SolverException):
    def __init__(self, message, residual=None, pivot_ratio=None):
        super(LinearSolverError, self).__init__('LinearSolverBreakdown', message,
                                                {'residual': residual, 'pivot_ratio': pivot_ratio})
        self.residual = residual
        self.pivot_ratio = pivot_ratio


class NonConvergenceError(SolverException):
    """fixed point did not converge; ``last_iterate`` keeps the final unknown vector"""

    def __init__(self, message, last_iterate=None, iterations=0, update=None):
        super(NonConvergenceError, self).__init__('FixedPointNonConvergence', message,
                                                  {'iterations': iterations, 'update': update})
        self.last_iterate = last_iterate
        self.iterations = iterations
        self.update = update


class PositivityError(SolverException):
    def __init__(self, element, min_eig):
        msg = u'stress lost positive definiteness on element {0} (min eigenvalue {1:.6e})'.format(element, min_eig)
        super(PositivityError, self).__init__('PositivityLoss', msg, {'element': element, 'min_eig': min_eig})
        self.element = element
        self.min_eig = min_eig


class StepSizeError(SolverException):
    def __init__(self, message, determinant=None):
        super(StepSizeError, self).__init__('StepSizeTooLarge', message, {'determinant': determinant})
        self.determinant = determinant


class ConfigError(SolverException):
    def __init__(self, ex=None, settings="", msg=""):
        if msg and settings:
            msg += u'\nInvalid Settings "{0}"'.format(settings)
        else:
            msg = msg or u'Invalid Settings "{0}"'.format(settings or 'unknown')
        if ex is not None:
            msg = u'{0}\nDetail: {1}'.format(msg, ex)

        super(ConfigError, self).__init__('InvalidConfig', msg)
        self.settings = settings
