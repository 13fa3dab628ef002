#!/usr/bin/env python

import io
import re

from setuptools import setup

with io.open("loopreg/__init__.py", "rt", encoding="utf8") as f:
    version = re.search(r"__version__ = '(.*?)'", f.read()).group(1)

from os import path

this_directory = path.abspath(path.dirname(__file__))

with io.open(path.join(this_directory, 'README.md'), encoding='utf-8') as file:
    long_description = file.read()


setup(
    name='loopreg',
    version=version,
    packages=['loopreg'],
    package_data={
        '': ['*.txt', '*.rst', '*.md'],
    },
    install_requires=[
        'numpy',
        'scipy',
        'scikit-learn',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['loopreg = loopreg.cli:main'],
    },
    author='loopreg developers',
    description='Regulated one-loop integrals and the dimensionally '
                'regularized values hidden in them',
    long_description=long_description,
    long_description_content_type="text/markdown",
    license='BSD',
    keywords='dimensional-regularization one-loop feynman-integral '
             'hypergeometric special-functions quadrature regularization',
    python_requires=">=3.7",
    classifiers=['Development Status :: 3 - Alpha',
                 'Intended Audience :: Science/Research',
                 'License :: OSI Approved :: BSD License',
                 'Operating System :: OS Independent',
                 'Programming Language :: Python :: 3',
                 'Programming Language :: Python :: 3.7',
                 'Programming Language :: Python :: 3.8',
                 'Programming Language :: Python :: 3.9',
                 'Topic :: Scientific/Engineering :: Physics',
                 'Topic :: Scientific/Engineering :: Mathematics']
)
