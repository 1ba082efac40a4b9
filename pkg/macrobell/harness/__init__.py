from .config import ScenarioConfig, shipped_configs
from .experiments import EXPERIMENTS
from .report import Report, ReportIO
from .runner import load_config, run_scenario
