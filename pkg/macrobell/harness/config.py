import copy
import json
import logging
import os

from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from ..utils import CONFIGS_ROOT, ConfigError

REQUIRED = object()

JSON_TYPES = {int: 'integer', float: 'number', bool: 'boolean', str: 'string', list: 'array'}

ENVELOPE_SCHEMA = {
    'type': 'object',
    'properties': {
        'kind': {'type': 'string'},
        'name': {'type': 'string'},
        'output': {'type': 'string'},
        'parameters': {'type': 'object'},
    },
    'required': ['kind'],
    'additionalProperties': False,
}


def value_schema(kind, default=None):
    """JSON Schema of one parameter type: a Python type or [TABLE] for a list of objects"""
    if isinstance(kind, list):
        schema = {'type': 'array', 'items': table_schema(kind[0])}
    else:
        schema = {'type': JSON_TYPES[kind]}
    if default is None:
        schema['type'] = [schema['type'], 'null']
    return schema


def table_schema(table):
    """JSON Schema of a {name: (type, default)} parameter table"""
    return {
        'type': 'object',
        'properties': {key: value_schema(kind, default) for key, (kind, default) in table.items()},
        'required': [key for key, (_, default) in table.items() if default is REQUIRED],
        'additionalProperties': False,
    }


def fill_defaults(raw, table):
    """A validated parameter dict with defaults filled in and numbers coerced"""
    parameters = {}
    for key, (kind, default) in table.items():
        value = raw[key] if key in raw else copy.deepcopy(default)
        if value is None:
            pass
        elif isinstance(kind, list):
            value = [fill_defaults(item, kind[0]) for item in value]
        elif kind is float:
            value = float(value)
        elif kind is int:
            value = int(value)
        parameters[key] = value
    return parameters


def error_field(error):
    """Dotted path of a jsonschema ValidationError, e.g. parameters.cases[0].settings"""
    field = ""
    for part in error.absolute_path:
        field += "[{}]".format(part) if isinstance(part, int) else ".{}".format(part)
    if error.validator == 'required':
        missing = [key for key in error.validator_value if key not in error.instance]
        field += "." + missing[0]
    elif error.validator == 'additionalProperties':
        unknown = sorted(set(error.instance) - set(error.schema.get('properties', {})))
        field += "." + unknown[0]
    return field.lstrip(".") or "<root>"


def check_document(document, schema):
    error = best_match(Draft7Validator(schema).iter_errors(document))
    if error is not None:
        raise ConfigError(error_field(error), error.message)


class ScenarioConfig:
    """An experiment description read from JSON

    {"kind": "zb_sweep", "name": "...", "parameters": {"seed": 1, ...}, "output": "..."}

    Fields:
    kind - experiment kind, a key of the experiment registry
    name - label used for report files. Default: the kind
    parameters - dict of validated parameters, defaults filled in
    output - optional report path
    """

    def __init__(self, kind, parameters, name=None, output=None):
        self.kind = kind
        self.parameters = parameters
        self.name = name or kind
        self.output = output

    @staticmethod
    def from_document(document, experiments):
        """Validate a config document against the experiment parameter tables

        Arguments:
        document - dict parsed from JSON
        experiments - dict mapping kind to experiment class

        Returns:
        ScenarioConfig
        """
        check_document(document, ENVELOPE_SCHEMA)
        kind = document['kind']
        if kind not in experiments:
            raise ConfigError("kind", "unknown experiment kind '{}', expected one of {}".format(
                kind, ", ".join(sorted(experiments))))

        experiment = experiments[kind]
        schema = dict(ENVELOPE_SCHEMA, properties=dict(
            ENVELOPE_SCHEMA['properties'], parameters=table_schema(experiment.PARAMETERS)))
        document = dict(document, parameters=document.get('parameters', {}))
        check_document(document, schema)
        parameters = fill_defaults(document['parameters'], experiment.PARAMETERS)
        experiment.validate(parameters)
        return ScenarioConfig(kind, parameters, name=document.get('name'),
                              output=document.get('output'))

    @staticmethod
    def load(path, experiments):
        """Read and validate a config file"""
        with open(path) as f:
            try:
                document = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError("<root>", "invalid JSON: {}".format(e))
        config = ScenarioConfig.from_document(document, experiments)
        if document.get('name') is None:
            config.name = os.path.splitext(os.path.basename(path))[0]
        logging.debug("loaded {} config '{}' from {}".format(config.kind, config.name, path))
        return config

    def with_seed(self, seed):
        parameters = dict(self.parameters)
        parameters['seed'] = seed
        return ScenarioConfig(self.kind, parameters, name=self.name, output=self.output)

    def to_document(self):
        document = {'kind': self.kind, 'name': self.name, 'parameters': self.parameters}
        if self.output is not None:
            document['output'] = self.output
        return document


def shipped_configs(base_path=CONFIGS_ROOT):
    """Paths of the configs bundled with the package, sorted by name"""
    for f in sorted(os.listdir(base_path)):
        path = os.path.join(base_path, f)
        if os.path.isfile(path) and f.endswith('.json'):
            yield path
