"""JSON run reports.

::

    {
      "schema": "holoknot.report",
      "schema_version": 1,
      "command": "statesum",
      "inputs": {... the run config ...},
      "versions": {"holoknot": "0.3.0", "numpy": ..., "scipy": ..., "mpmath": ...},
      "results": {"statesum": {"value": [re, im], "error_estimate": ..., "diagnostics": {...}}},
      "checks": [{"name": ..., "passed": true, "value": ..., "threshold": ...}],
      "passed": true
    }

Complex numbers are [re, im] pairs. A ``timing`` object is added only when
the config asks for it, so reruns with the same config and seed produce
identical files.
"""
import json
import platform
import sys

import mpmath
import numpy as np
import scipy

import holoknot
from holoknot.cli.cli_error import ReportError
from lib.numeric import encode

SCHEMA = 'holoknot.report'
SCHEMA_VERSION = 1


class Report:

    def __init__(self, command, inputs, timing=False):
        self.command = command
        self.inputs = inputs
        self.results = {}
        self.checks = []
        self.timing = {} if timing else None

    @staticmethod
    def versions():
        return {
            'holoknot': holoknot.__version__,
            'python': platform.python_version(),
            'numpy': np.__version__,
            'scipy': scipy.__version__,
            'mpmath': mpmath.__version__,
        }

    def add_result(self, name, /, value=None, error_estimate=None, diagnostics=None, **fields):
        entry = dict(fields)
        if value is not None:
            entry['value'] = value
            entry['error_estimate'] = error_estimate
        if diagnostics is not None:
            entry['diagnostics'] = diagnostics
        self.results[name] = entry
        return entry

    def add_check(self, name, passed, value=None, threshold=None, informational=False):
        self.checks.append({'name': name, 'passed': bool(passed), 'value': value,
                            'threshold': threshold, 'informational': bool(informational)})

    def add_timing(self, stage, seconds):
        if self.timing is not None:
            self.timing[stage] = seconds

    @property
    def passed(self) -> bool:
        return all(check['passed'] for check in self.checks if not check['informational'])

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_document(self) -> dict:
        document = {
            'schema': SCHEMA,
            'schema_version': SCHEMA_VERSION,
            'command': self.command,
            'inputs': self.inputs,
            'versions': self.versions(),
            'results': self.results,
            'checks': self.checks,
            'passed': self.passed,
        }
        if self.timing is not None:
            document['timing'] = self.timing
        return encode(document)

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True, allow_nan=True)

    def write(self, path=''):
        """Write to ``path``, or to standard output when it is empty or '-'."""
        text = self.dumps()
        if not path or path == '-':
            sys.stdout.write(text + '\n')
            return
        try:
            with open(path, 'w', encoding='utf-8') as file:
                file.write(text + '\n')
        except OSError as error:
            raise ReportError('cannot write report {0}: {1}'.format(path, error))


def validate_report(document) -> list:
    """Schema problems of a report document; empty when it is valid."""
    problems = []
    if not isinstance(document, dict):
        return ['report must be a JSON object']
    if document.get('schema') != SCHEMA:
        problems.append('schema is {0!r}'.format(document.get('schema')))
    if document.get('schema_version') != SCHEMA_VERSION:
        problems.append('unsupported schema version {0!r}'.format(document.get('schema_version')))
    for key, kind in (('command', str), ('inputs', dict), ('versions', dict), ('results', dict),
                      ('checks', list), ('passed', bool)):
        if not isinstance(document.get(key), kind):
            problems.append('{0} must be a {1}'.format(key, kind.__name__))
    for name, result in (document.get('results') or {}).items():
        if isinstance(result, dict) and 'value' in result and 'error_estimate' not in result:
            problems.append('result {0} has a value without an error estimate'.format(name))
    return problems
