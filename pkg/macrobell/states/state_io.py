import json
import logging
from os import listdir
from os.path import isfile, join

import numpy as np

from ..utils import InvalidStateError, save_json
from .state_utils import DensityMatrix, PureState


class StateIO:
    """Utility to save and load states as JSON documents.

    A state document looks like
    {"qubits": N, "kind": "pure" | "mixed", "data": [[re, im], ...]}
    with the amplitudes (pure) or matrix entries (mixed) in row-major order.
    Floats are written with full precision, so a load returns the saved values exactly.
    """

    def __init__(self, base_path="./states"):
        """Create the StateIO instance.

        Arguments:
        base_path - folder holding the state documents. Default: "./states"
        """
        self.base_path = base_path

    def get_states(self):
        """Yields the state documents in the base_path
        """
        for f in sorted(listdir(self.base_path)):
            if isfile(join(self.base_path, f)) and f.endswith('.json'):
                yield f

    @staticmethod
    def to_document(state):
        if isinstance(state, PureState):
            kind, values = 'pure', state.amplitudes
        elif isinstance(state, DensityMatrix):
            kind, values = 'mixed', state.matrix.reshape(-1)
        else:
            raise InvalidStateError("cannot serialize {}".format(type(state).__name__))
        return {
            'qubits': state.qubit_count,
            'kind': kind,
            'data': [[float(v.real), float(v.imag)] for v in values],
        }

    @staticmethod
    def from_document(document):
        try:
            qubits = int(document['qubits'])
            kind = document['kind']
            data = np.array(document['data'], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidStateError("malformed state document: {}".format(e))
        if data.ndim != 2 or data.shape[1] != 2:
            raise InvalidStateError("state data must be a list of [re, im] pairs")
        values = data[:, 0] + 1j * data[:, 1]
        dimension = 2 ** qubits

        if kind == 'pure':
            if values.shape[0] != dimension:
                raise InvalidStateError("expected {} amplitudes, got {}".format(
                    dimension, values.shape[0]))
            return PureState(values)
        if kind == 'mixed':
            if values.shape[0] != dimension * dimension:
                raise InvalidStateError("expected {} matrix entries, got {}".format(
                    dimension * dimension, values.shape[0]))
            return DensityMatrix(values.reshape(dimension, dimension))
        raise InvalidStateError("unknown state kind '{}'".format(kind))

    def _path(self, name):
        if name.endswith('.json'):
            name = name[:-5]
        return "%s/%s.json" % (self.base_path, name)

    def save_state(self, name, state):
        """Write a state under base_path

        Arguments:
        name - document name, with or without the .json extension
        state - PureState or DensityMatrix
        """
        path = self._path(name)
        save_json(StateIO.to_document(state), path)
        logging.debug("saved {}-qubit state to {}".format(state.qubit_count, path))

    def load_state(self, name):
        """Load a state document

        Arguments:
        name - document name, with or without the .json extension

        Returns:
        PureState or DensityMatrix
        """
        with open(self._path(name)) as f:
            return StateIO.from_document(json.load(f))
