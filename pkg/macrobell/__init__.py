from . import pauli, states, criteria, trees, monogamy, bell, harness

from ._version import __version__
