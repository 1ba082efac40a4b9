#!/usr/bin/env python3

from setuptools import setup, find_packages
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

version = {}
with open(path.join(here, 'macrobell', '_version.py'), encoding='utf-8') as f:
    exec(f.read(), version)

setup(
    name='macrobell-utils',
    version=version['__version__'],
    packages=find_packages(include=["macrobell", "macrobell.*"]),
    description='Checks that macroscopic spin correlations admit local hidden variable models',
    long_description=long_description,
    long_description_content_type='text/markdown',
    classifiers=[
        'Development Status :: 3 - Alpha',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',

        'Topic :: Scientific/Engineering :: Physics'
    ],
    keywords='bell-inequality local-hidden-variables quantum-correlations werner-state',
    python_requires='>=3.8, <4',
    install_requires=[
        'numpy>=1.18.0',
        'scipy>=1.6.0',
        'pandas>=1.0.0',
        'joblib>=0.17.0',
        'jsonschema>=3.2.0'
    ],
    extras_require={
        'dev': ['check-manifest'],
        'test': ['pytest', 'hypothesis', 'coverage'],
    },
    package_data={'macrobell': ['configs/*.json']},
    entry_points={
        'console_scripts': ['macrobell=macrobell.__main__:main'],
    },
    include_package_data=True,
)
