from .pauli_utils import Direction, MeasurementFrame, PauliLabel, PauliString, PauliUtils
