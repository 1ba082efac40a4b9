import numpy as np
import pytest

from macrobell.states import StateIO, StateUtils
from macrobell.utils import InvalidStateError


class TestStateIO:
    def test_pure_document(self):
        document = StateIO.to_document(StateUtils.named_state('singlet', 2))
        assert document['qubits'] == 2
        assert document['kind'] == 'pure'
        assert len(document['data']) == 4

    def test_save_and_load(self, tmp_path):
        rng = np.random.default_rng(1)
        io = StateIO(str(tmp_path))
        mixed = StateUtils.named_state('random_mixed', 2, rng)
        io.save_state('mixed', mixed)
        io.save_state('ghz.json', StateUtils.named_state('ghz', 3))
        assert list(io.get_states()) == ['ghz.json', 'mixed.json']
        assert np.array_equal(io.load_state('mixed').matrix, mixed.matrix)
        assert io.load_state('ghz').qubit_count == 3

    def test_wrong_length(self):
        with pytest.raises(InvalidStateError):
            StateIO.from_document({'qubits': 2, 'kind': 'pure', 'data': [[1, 0]]})

    def test_unknown_kind(self):
        with pytest.raises(InvalidStateError):
            StateIO.from_document({'qubits': 1, 'kind': 'qutrit', 'data': [[1, 0], [0, 0]]})

    def test_missing_field(self):
        with pytest.raises(InvalidStateError):
            StateIO.from_document({'kind': 'pure'})
