import json
import os
import uuid

MACROBELL_ROOT = os.path.dirname(os.path.abspath(__file__))

CONFIGS_ROOT = os.path.join(MACROBELL_ROOT, 'configs')

# Environment variable overriding the joblib worker count
N_JOBS_ENV = 'MACROBELL_N_JOBS'

# Dense-matrix limits
DENSE_QUBIT_LIMIT = 12
PURE_QUBIT_LIMIT = 20

# Tolerances
UNIT_NORM_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
CRITERION_TOL = 1e-9
POVM_TOL = 1e-10
PROBABILITY_TOL = 1e-9
THRESHOLD_SLACK = 1e-12


def n_jobs(default=-1):
    """Worker count for joblib, honouring MACROBELL_N_JOBS

    Arguments:
    default - value used when the variable is unset. Default: -1 (all cores)

    Returns:
    Integer worker count
    """
    value = os.environ.get(N_JOBS_ENV)
    if value is None or value.strip() == '':
        return default
    try:
        return int(value)
    except ValueError:
        raise ConfigError(N_JOBS_ENV, "expected an integer, got '{}'".format(value))


def save_json(document, filename):
    """Write a JSON document atomically, keys sorted

    The document goes to a randomly named file next to the target which then
    replaces the target, so readers never see a half-written file.
    """
    directory = os.path.dirname(os.path.abspath(filename))
    os.makedirs(directory, exist_ok=True)
    temp_file = os.path.join(directory, str(uuid.uuid4()))

    with open(temp_file, "w") as temp:
        json.dump(document, temp, indent=2, sort_keys=True)
        temp.write("\n")

    os.replace(temp_file, filename)


class MacroBellError(Exception):
    """Base class of every error raised by macrobell"""


class InvalidDirectionError(MacroBellError, ValueError):
    pass


class DegenerateSettingsError(MacroBellError, ValueError):
    pass


class InvalidStateError(MacroBellError, ValueError):
    pass


class StateSizeError(MacroBellError, ValueError):
    pass


class PartitionError(MacroBellError, ValueError):
    pass


class DimensionMismatchError(MacroBellError, ValueError):
    pass


class FrameCountError(MacroBellError, ValueError):
    pass


class InternalConsistencyError(MacroBellError, RuntimeError):
    """Two independent routes to the same quantity disagree"""


class MissingCorrelationError(MacroBellError, KeyError):
    pass


class ConstructionError(MacroBellError, RuntimeError):
    pass


class TreeSizeError(MacroBellError, ValueError):
    pass


class OffsetOutOfRangeError(MacroBellError, ValueError):
    pass


class RegionTooSmallError(MacroBellError, ValueError):
    pass


class ScenarioError(MacroBellError, ValueError):
    pass


class ScenarioTooLargeError(MacroBellError, ValueError):
    pass


class SettingsBudgetError(MacroBellError, ValueError):
    pass


class ConfigError(MacroBellError, ValueError):
    """Invalid scenario configuration

    Fields:
    field - dotted path of the offending entry, e.g. "parameters.seed"
    reason - what is wrong with it
    """

    def __init__(self, field, reason):
        super().__init__("{}: {}".format(field, reason))
        self.field = field
        self.reason = reason


class DomainError(MacroBellError, ValueError):
    """Argument outside the domain of a numeric helper"""
