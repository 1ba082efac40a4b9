import logging
import os

import numpy as np
import pandas as pd

from ..utils import save_json


def _plain(value):
    """Numpy scalars and arrays as JSON-ready Python values"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class Report:
    """Outcome of one experiment run

    Fields:
    config - the ScenarioConfig that was run
    records - per-trial dicts, in plan order
    summary - aggregate statistics
    checks - dict of check name to bool
    wall_clock_seconds - run time
    """

    def __init__(self, config, records, summary, checks, wall_clock_seconds):
        self.config = config
        self.records = _plain(records)
        self.summary = _plain(summary)
        self.checks = {name: bool(passed) for name, passed in checks.items()}
        self.wall_clock_seconds = float(wall_clock_seconds)

    @property
    def passed(self):
        return all(self.checks.values())

    def failed_checks(self):
        return sorted(name for name, passed in self.checks.items() if not passed)

    def to_document(self):
        return {
            'config': _plain(self.config.to_document()),
            'records': self.records,
            'summary': self.summary,
            'checks': self.checks,
            'passed': self.passed,
            'wall_clock_seconds': self.wall_clock_seconds,
        }

    def to_frame(self):
        """Records as a DataFrame, nested fields flattened to dotted columns"""
        return pd.json_normalize(self.records)

    def to_table(self):
        """One row per check, for printing"""
        df = pd.DataFrame({'check': list(self.checks),
                           'passed': list(self.checks.values())})
        df.insert(0, 'experiment', self.config.name)
        return df


class ReportIO:
    """Writes reports under base_path"""

    def __init__(self, base_path="./reports"):
        self.base_path = base_path

    def report_path(self, report):
        if report.config.output is not None:
            return report.config.output
        return os.path.join(self.base_path, "{}.json".format(report.config.name))

    def save_report(self, report, path=None):
        path = path or self.report_path(report)
        save_json(report.to_document(), path)
        logging.info("report for '{}' written to {}".format(report.config.name, path))
        return path

    def save_csv(self, report, path=None):
        path = path or os.path.splitext(self.report_path(report))[0] + ".csv"
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        report.to_frame().to_csv(path, index=False)
        logging.debug("records of '{}' written to {}".format(report.config.name, path))
        return path
