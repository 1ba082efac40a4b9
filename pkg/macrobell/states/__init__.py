from .state_utils import DensityMatrix, Partition, PureState, ReducedStateCache, StateUtils, \
    WernerState
from .state_io import StateIO
