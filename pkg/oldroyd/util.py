#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

import logging

import numpy as np
import six

logger = logging.getLogger(__name__)


class PrefixLoggerAdapter(logging.LoggerAdapter):
    """Prepend a fixed prefix (e.g. the run tag) to every message."""

    def __init__(self, prefix, extra, *args, **kwargs):
        super(PrefixLoggerAdapter, self).__init__(*args, **kwargs)
        self._prefix = prefix
        self._extra = extra

    def process(self, msg, kwargs):
        kwargs['extra'] = kwargs.get('extra', {})
        kwargs['extra'].update(self._extra)

        return "{0}{1}".format(self._prefix, msg), kwargs


class Util(object):
    @staticmethod
    def relative_update(new, old, floor=1.0):
        """ ||new - old|| / max(||new||, floor), 2-norm over the whole vector

        :type new: numpy.ndarray
        :param new: current iterate

        :type old: numpy.ndarray
        :param old: previous iterate

        :type floor: float
        :param floor: lower bound of the denominator

        :return: float
        """
        scale = max(float(np.linalg.norm(new)), floor)
        return float(np.linalg.norm(new - old)) / scale

    @staticmethod
    def to_bool(value):
        if isinstance(value, bool):
            return value
        if isinstance(value, six.string_types):
            v = value.strip().lower()
            if v in ('1', 'true', 'yes', 'on'):
                return True
            if v in ('0', 'false', 'no', 'off'):
                return False
        raise ValueError(u'not a boolean: "{0}"'.format(value))

    @staticmethod
    def run_tag(cfg):
        return u"[{0}/{1}/{2}/{3}] ".format(cfg.formulation.value, cfg.advection.value,
                                             cfg.elements.value, cfg.stress_space.value)

    @staticmethod
    def get_run_logger(cfg, name=None):
        return PrefixLoggerAdapter(Util.run_tag(cfg), {}, logging.getLogger(name or __name__), {})
