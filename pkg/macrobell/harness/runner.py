import logging
import time

import numpy as np
from joblib import Parallel, delayed

from ..utils import n_jobs
from .config import ScenarioConfig
from .experiments import EXPERIMENTS
from .report import Report


def _trial(experiment, task, seed_sequence, parameters):
    return experiment.run_trial(task, np.random.default_rng(seed_sequence), parameters)


def run_scenario(config, jobs=None):
    """Run every trial of a config and summarize

    Each trial draws from its own generator spawned off the config seed, so
    the records do not depend on the worker count or on scheduling.

    Arguments:
    config - ScenarioConfig
    jobs - joblib worker count. Default: MACROBELL_N_JOBS, else all cores

    Returns:
    Report
    """
    experiment = EXPERIMENTS[config.kind]
    parameters = config.parameters
    tasks = experiment.plan(parameters)
    seeds = np.random.SeedSequence(parameters['seed']).spawn(len(tasks))
    jobs = n_jobs() if jobs is None else jobs
    logging.info("running '{}' ({}): {} trials".format(config.name, config.kind, len(tasks)))

    start = time.perf_counter()
    records = Parallel(n_jobs=jobs, prefer="threads")(
        delayed(_trial)(experiment, task, seed, parameters)
        for task, seed in zip(tasks, seeds)
    )
    summary, checks = experiment.summarize(records, parameters)
    elapsed = time.perf_counter() - start

    report = Report(config, records, summary, checks, elapsed)
    if report.passed:
        logging.info("'{}' passed in {:.1f}s".format(config.name, elapsed))
    else:
        logging.warning("'{}' failed checks: {}".format(
            config.name, ", ".join(report.failed_checks())))
    return report


def load_config(path):
    return ScenarioConfig.load(path, EXPERIMENTS)
