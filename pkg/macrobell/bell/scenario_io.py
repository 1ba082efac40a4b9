import json
from os import listdir
from os.path import isfile, join

import numpy as np

from ..utils import ScenarioError, save_json
from .bell_utils import BellScenario


class ScenarioIO:
    """Utility to save and load Bell scenarios and membership verdicts.

    A scenario document looks like
    {"block_size": M, "regions": [{"settings": [{"elements": [E, ...]}, ...]}, ...]}
    where every POVM element E is a list of [re, im] pairs in row-major order.
    The outcome count of a setting is the number of its elements.
    """

    def __init__(self, base_path="./scenarios"):
        self.base_path = base_path

    def get_scenarios(self):
        """Yields the scenario documents in the base_path
        """
        for f in sorted(listdir(self.base_path)):
            if isfile(join(self.base_path, f)) and f.endswith('.json'):
                yield f

    @staticmethod
    def to_document(scenario):
        regions = []
        for stack in scenario.elements:
            settings = []
            for setting in stack:
                settings.append({'elements': [
                    [[float(v.real), float(v.imag)] for v in element.reshape(-1)]
                    for element in setting]})
            regions.append({'settings': settings})
        return {'block_size': scenario.block_size, 'regions': regions}

    @staticmethod
    def from_document(document):
        try:
            block_size = int(document.get('block_size', 1))
            dimension = 2 ** block_size
            measurements = []
            for region in document['regions']:
                settings = []
                for setting in region['settings']:
                    elements = []
                    for pairs in setting['elements']:
                        data = np.array(pairs, dtype=float)
                        elements.append((data[:, 0] + 1j * data[:, 1]).reshape(
                            dimension, dimension))
                    settings.append(elements)
                measurements.append(settings)
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise ScenarioError("malformed scenario document: {}".format(e))
        return BellScenario(measurements, block_size=block_size)

    @staticmethod
    def verdict_document(verdict):
        return {
            'feasible': bool(verdict.feasible),
            'residual': float(verdict.residual),
            'strategy_count': int(verdict.strategy_count),
            'certificate': verdict.model.to_document() if verdict.model is not None else None,
        }

    def _path(self, name):
        if name.endswith('.json'):
            name = name[:-5]
        return "%s/%s.json" % (self.base_path, name)

    def save_scenario(self, name, scenario):
        save_json(ScenarioIO.to_document(scenario), self._path(name))

    def load_scenario(self, name):
        """Load a scenario document

        Arguments:
        name - document name, with or without the .json extension

        Returns:
        BellScenario
        """
        with open(self._path(name)) as f:
            return ScenarioIO.from_document(json.load(f))

    def save_verdict(self, name, verdict):
        save_json(ScenarioIO.verdict_document(verdict), self._path(name))
