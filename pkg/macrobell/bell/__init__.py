from .bell_utils import BellScenario, BellUtils, ChshResult, JointDistribution, LHVModel, \
    MembershipVerdict
from .scenario_io import ScenarioIO
