from .criteria_utils import BellCoefficients, CorrelationTensor, CriteriaUtils, \
    MagnetizationCorrelation
