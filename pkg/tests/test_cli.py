import json
import os
import tempfile
import unittest
from unittest import mock

from holoknot.action.builder import build_classical_action
from holoknot.cli.app import HoloKnotApp
from holoknot.cli.fixtures import builtin_representation, emit_builtin_fixtures
from holoknot.cli.parser import build_parser, config_from_args
from holoknot.cli.pipeline import Pipeline, known_volume, load_diagram
from holoknot.cli.report import Report, validate_report
from holoknot.coloring.representation import load_representation
from holoknot.coloring.shadow import normalize, parameters, propagate_shadow
from holoknot.core.config import RunConfig
from holoknot.core.core_error import ConfigError, InputError
from holoknot.diagram.builtin import BUILTIN_NAMES, builtin
from holoknot.diagram.diagram import parse_diagram
from holoknot.geometry.geometry_error import ConvergenceError

FIGURE8_VOLUME = 2.029883212819307


class TestFixtures(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.paths = emit_builtin_fixtures(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def _load(self, name):
        with open(os.path.join(self.directory.name, name)) as file:
            return json.load(file)

    def test_written(self):
        self.assertEqual(len(self.paths), 4)
        for path in self.paths:
            self.assertTrue(os.path.isfile(path))

    def test_figure8_parses(self):
        D = parse_diagram(self._load('figure8.json'))
        self.assertEqual(D, builtin('figure8'))
        self.assertEqual(load_diagram(os.path.join(self.directory.name, 'figure8.json')), D)

    def test_trefoil_segments(self):
        D = parse_diagram(self._load('trefoil.json'))
        self.assertEqual(len(D.E), 5)
        self.assertEqual(2 * D.cr, len(D.E) + 1)

    def test_representations_satisfy_relations(self):
        for name in ('figure8', 'trefoil'):
            D = builtin(name)
            representation = load_representation(self._load(name + '_rep.json'), D)
            self.assertLess(max(representation.coloring.relation_residuals().values()), 1e-9)
            self.assertLess(representation.coloring.boundary_residual(), 1e-9)

    def test_builtin_colorings_admissible(self):
        for name in BUILTIN_NAMES:
            D = builtin(name)
            representation = builtin_representation(D)
            shadow = propagate_shadow(D, representation.coloring, representation.u0)
            parameter_set = parameters(normalize(shadow))
            self.assertTrue(parameter_set.admissible, (name, parameter_set.inadmissible))
            self.assertTrue(parameter_set.normalized)

    def test_figure8_representation_parabolic(self):
        self.assertAlmostEqual(builtin_representation(builtin('figure8')).m, 1.0, places=12)


class TestReport(unittest.TestCase):

    def setUp(self):
        self.report = Report('statesum', {'N': 2})

    def test_schema(self):
        self.report.add_result('statesum', 1 + 2j, 1e-15, {'terms': 32})
        self.report.add_check('agreement', True, 1e-14, 1e-9)
        document = json.loads(self.report.dumps())
        self.assertEqual(validate_report(document), [])
        self.assertEqual(document['results']['statesum']['value'], [1.0, 2.0])
        self.assertNotIn('timing', document)

    def test_invalid_documents(self):
        self.assertTrue(validate_report([]))
        document = json.loads(self.report.dumps())
        document['schema_version'] = 99
        document['results'] = {'x': {'value': 1.0}}
        self.assertEqual(len(validate_report(document)), 2)

    def test_exit_codes(self):
        self.report.add_check('scan', False, informational=True)
        self.assertEqual(self.report.exit_code, 0)
        self.report.add_check('final_error', False, 0.2, 5e-2)
        self.assertFalse(self.report.passed)
        self.assertEqual(self.report.exit_code, 1)

    def test_result_field_called_name(self):
        entry = self.report.add_result('diagram', name='figure8', segments=7)
        self.assertEqual(entry, {'name': 'figure8', 'segments': 7})

    def test_timing(self):
        report = Report('critical', {}, timing=True)
        report.add_timing('solve', 0.5)
        self.assertEqual(report.to_document()['timing'], {'solve': 0.5})


class TestParser(unittest.TestCase):

    def setUp(self):
        self.parser = build_parser()

    def test_statesum(self):
        args = self.parser.parse_args(['statesum', 'trefoil', '--N', '3', '--mu', '0.1,0.2', '--seed', '4'])
        config = config_from_args(args)
        self.assertEqual((config.command, config.diagram, config.N, config.seed), ('statesum', 'trefoil', 3, 4))
        self.assertEqual(config.representation, 'builtin')
        self.assertEqual(config.mu_value, 0.1 + 0.2j)
        self.assertFalse(config.timing)

    def test_global_flags_before_command(self):
        args = self.parser.parse_args(['--tolerance-profile', 'strict', '--threads', '2',
                                       'stateintegral', 'figure8', '--k', '1,0,-1'])
        config = config_from_args(args)
        self.assertEqual((config.profile, config.threads), ('strict', 2))
        self.assertEqual(config.k_vector, [1, 0, -1])

    def test_nested_commands(self):
        for argv, command in ((['diagram', 'validate', 'figure8'], 'diagram-validate'),
                              (['diagram', 'regions', 'trefoil', '--seed', '2'], 'diagram-regions'),
                              (['action', 'show', 'figure8', '--classical'], 'action-show'),
                              (['dilog', 'check', '--N', '5'], 'dilog-check')):
            config = config_from_args(self.parser.parse_args(argv))
            self.assertEqual(config.command, command)
        config = config_from_args(self.parser.parse_args(['action', 'show', 'figure8', '--classical']))
        self.assertTrue(config.classical)
        self.assertEqual(config.diagram, 'figure8')

    def test_hyphenated_commands_rejected(self):
        with mock.patch('sys.stderr'):
            with self.assertRaises(SystemExit):
                self.parser.parse_args(['diagram-validate', 'figure8'])
            with self.assertRaises(SystemExit):
                self.parser.parse_args(['diagram', 'figure8'])

    def test_spaced_command_in_config_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'run.json')
            with open(path, 'w') as file:
                json.dump({'command': 'diagram validate', 'diagram': 'trefoil'}, file)
            report = Pipeline(config_from_args(self.parser.parse_args(['run', path]))).run()
            self.assertEqual(report.results['diagram']['segments'], 5)

    def test_range_error(self):
        with self.assertRaises(ConfigError):
            config_from_args(self.parser.parse_args(['statesum', 'trefoil', '--N', '1']))

    def test_run_overrides(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'run.json')
            with open(path, 'w') as file:
                json.dump({'command': 'statesum', 'diagram': 'trefoil', 'N': 3, 'timing': True}, file)
            config = config_from_args(self.parser.parse_args(['run', path, '--seed', '8']))
            self.assertEqual((config.command, config.N, config.seed), ('statesum', 3, 8))
            self.assertTrue(config.timing)

            with open(path, 'w') as file:
                json.dump({'diagram': 'trefoil'}, file)
            with self.assertRaises(ConfigError):
                config_from_args(self.parser.parse_args(['run', path]))


class TestPipeline(unittest.TestCase):

    def _run(self, **properties):
        return Pipeline(RunConfig(**properties)).run()

    def test_diagram_validate(self):
        report = self._run(command='diagram-validate', diagram='figure8')
        self.assertTrue(report.passed)
        self.assertEqual(report.results['diagram']['diagram'], 'figure8')
        self.assertEqual(report.results['diagram']['segments'], 7)

    def test_regions(self):
        report = self._run(command='diagram-regions', diagram='trefoil')
        self.assertEqual(len(report.results['regions']['regions']), len(builtin('trefoil').regions()))

    def test_missing_diagram(self):
        with self.assertRaises(InputError):
            self._run(command='diagram-validate', diagram=os.path.join('no', 'such', 'knot.json'))

    def test_color(self):
        report = self._run(command='color', diagram='trefoil', representation='builtin', gauge_search=True)
        parameters = report.results['parameters']
        self.assertTrue(parameters['admissible'])
        self.assertAlmostEqual(abs(parameters['b']['in'] - 1), 0.0, places=8)

    def test_action_show(self):
        report = self._run(command='action-show', diagram='figure8', classical=True)
        action = build_classical_action(builtin('figure8'))
        self.assertEqual(report.results['action']['text'], action.text())
        self.assertEqual(len(report.results['action']['terms']), len(action))

    def test_statesum_bit_identical(self):
        properties = dict(command='statesum', diagram='trefoil', representation='builtin', N=2, seed=11)
        first = self._run(**properties)
        second = self._run(**properties)
        self.assertEqual(first.dumps(), second.dumps())
        self.assertTrue(first.passed)
        self.assertEqual([check['name'] for check in first.checks], ['backend_agreement'])
        document = json.loads(first.dumps())
        self.assertEqual(validate_report(document), [])
        self.assertGreater(document['results']['statesum']['diagnostics']['pole_distance'], 1e-8)
        self.assertNotIn('elapsed', document['results']['statesum']['diagnostics'])

    def test_critical_figure8(self):
        report = self._run(command='critical', diagram='figure8', seed=1)
        self.assertTrue(report.passed, report.checks)
        self.assertAlmostEqual(report.results['critical']['volume'], FIGURE8_VOLUME, delta=1e-6)
        self.assertAlmostEqual(known_volume('figure8'), FIGURE8_VOLUME, places=12)

    def test_stage_signals(self):
        events = []

        def started(command, stage):
            events.append(stage)

        pipeline = Pipeline(RunConfig(command='diagram-validate', diagram='figure8'))
        pipeline.pre_stage.connect(started)
        pipeline.run()
        self.assertEqual(events, ['diagram'])


class TestApp(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.output = os.path.join(self.directory.name, 'report.json')

    def tearDown(self):
        self.directory.cleanup()

    def _start(self, *argv):
        app = HoloKnotApp(build_parser().parse_args(list(argv) + ['--output', self.output]))
        exit_code = app.start()
        app.finalize(exit_code)
        return exit_code

    def test_success(self):
        self.assertEqual(self._start('diagram', 'validate', 'trefoil'), 0)
        with open(self.output) as file:
            document = json.load(file)
        self.assertEqual(validate_report(document), [])
        self.assertEqual(document['inputs']['diagram'], 'trefoil')

    def test_missing_diagram_file(self):
        with self.assertLogs('holoknot.cli.app', level='ERROR'):
            exit_code = self._start('diagram', 'validate', os.path.join(self.directory.name, 'missing.json'))
        self.assertEqual(exit_code, 2)
        self.assertFalse(os.path.exists(self.output))

    def test_malformed_diagram(self):
        path = os.path.join(self.directory.name, 'broken.json')
        with open(path, 'w') as file:
            file.write('{"name": ')
        with self.assertLogs('holoknot.cli.app', level='ERROR'):
            self.assertEqual(self._start('diagram', 'validate', path), 2)

    def test_numerical_failure(self):
        with mock.patch('holoknot.cli.pipeline.find_critical_point',
                        side_effect=ConvergenceError('figure8: no critical point found')):
            with self.assertLogs('holoknot.cli.app', level='ERROR'):
                self.assertEqual(self._start('critical', 'figure8'), 3)

    def test_fixtures_command(self):
        directory = os.path.join(self.directory.name, 'fixtures')
        self.assertEqual(self._start('fixtures', directory), 0)
        self.assertEqual(sorted(os.listdir(directory)),
                         ['figure8.json', 'figure8_rep.json', 'trefoil.json', 'trefoil_rep.json'])


if __name__ == '__main__':
    unittest.main()
