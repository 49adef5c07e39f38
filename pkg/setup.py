#!/usr/bin/env python
# encoding: utf-8
#
# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Setup script for oldroyd-fe.

You need numpy, scipy and six.
https://numpy.org/
https://scipy.org/
https://pypi.python.org/pypi/six

Depending on your version of Python, these libraries may also should be installed:
http://pypi.python.org/pypi/enum34

"""

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


import sys
import re

install_requires_common = ['numpy', 'scipy', 'six']
install_requires = []

if sys.version_info[0] == 2:
    install_requires = ['enum34']

install_requires.extend(install_requires_common)

packages = [
            'oldroyd',
            'oldroyd.schemes',
            'oldroyd.diagnostics'
            ]

version = ''
with open('oldroyd/version.py', 'r') as fd:
    version = re.search(r'^__version__\s*=\s*[\'"]([^\'"]*)[\'"]',
                        fd.read(), re.MULTILINE).group(1)

classifiers = [
            'Development Status :: 4 - Beta',
            'License :: OSI Approved :: MIT License',
            'Operating System :: OS Independent',
            'Intended Audience :: Science/Research',
            'Topic :: Scientific/Engineering :: Mathematics',
            'Programming Language :: Python :: 2.7',
            'Programming Language :: Python :: 3.6',
            'Programming Language :: Python :: 3.7',
            'Programming Language :: Python :: 3.8',
    ]


long_description = """
Energy-stable finite element schemes for the Oldroyd-B viscoelastic fluid in 2D,
with a per-step free energy certificate.
"""

setup(
      name='oldroyd-fe',
      version=version,
      description='Free energy certified finite element solver for Oldroyd-B flows',
      author='oldroyd-fe developers',
      install_requires=install_requires,
      packages=packages,
      classifiers=classifiers,
      long_description=long_description,
      entry_points={
          'console_scripts': ['oldroyd-fe=oldroyd.diagnostics.cli:main'],
      }
     )
