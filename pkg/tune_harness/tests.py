import csv
import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings, tag

from tune_control.closed_loop import LeadLagParams
from tune_control.damping import min_damping_ratio, objective
from tune_control.plant import REFERENCE_PLANT_FILE, get_reference_plant, parse_plant
from tune_numerics.linalg import Spectrum
from tune_optimizers.choices import ALGORITHM_ORDER, BOA, DE, GA

from .exceptions import ConfigError, ExperimentRunError
from .reference import OPEN_LOOP_DESIGN, OPEN_LOOP_TOLERANCE, REFERENCE_DESIGNS
from .schemas import ComparisonReport, load_experiment_config
from .services import ExperimentService, median_trace

SMALL_EXPERIMENT = {
    'algorithms': {
        'boa': {'population_size': 6, 'generations': 3},
        'ga': {'population_size': 6, 'generations': 3},
        'de': {'population_size': 6, 'generations': 3},
    },
    'seeds': [0, 1],
}


class ExperimentTestCase(SimpleTestCase):

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.root = Path(directory.name)

    def write_config(self, payload, name='experiment.json'):
        path = self.root / name
        path.write_text(json.dumps(payload), encoding='utf-8')
        return path

    def run_command(self, *args, **options):
        out = StringIO()
        call_command('tune', *args, stdout=out, **options)
        return out.getvalue()


class RunExperimentTest(ExperimentTestCase):

    def test_writes_csv_and_reports(self):
        config = self.write_config({**SMALL_EXPERIMENT, 'output_dir': 'out'})
        output = self.run_command(config=str(config))
        self.assertIn('Эксперимент завершён', output)

        out = self.root / 'out'
        self.assertTrue((out / 'report.json').exists())
        self.assertTrue((out / 'report.txt').exists())
        self.assertIn('BOA - Butterfly Optimization Algorithm', (out / 'report.txt').read_text(encoding='utf-8'))
        for algorithm in ALGORITHM_ORDER:
            for seed in (0, 1):
                with (out / 'convergence' / f'{algorithm}_seed{seed}.csv').open(encoding='utf-8') as f:
                    rows = list(csv.reader(f))
                self.assertEqual(rows[0], ['generation', 'best_objective'])
                self.assertEqual(len(rows), 1 + 4)
                self.assertEqual([int(row[0]) for row in rows[1:]], [0, 1, 2, 3])
                values = [float(row[1]) for row in rows[1:]]
                self.assertEqual(values, sorted(values))

    def test_report_is_reproducible(self):
        config = self.write_config(SMALL_EXPERIMENT)
        self.run_command(config=str(config), out=str(self.root / 'first'))
        self.run_command(config=str(config), out=str(self.root / 'second'))
        first = (self.root / 'first' / 'report.json').read_bytes()
        second = (self.root / 'second' / 'report.json').read_bytes()
        self.assertEqual(first, second)
        self.assertEqual(
            (self.root / 'first' / 'report.txt').read_bytes(),
            (self.root / 'second' / 'report.txt').read_bytes(),
        )

    @override_settings(TUNE_WORKERS=2)
    def test_parallel_runs_match_sequential(self):
        config = load_experiment_config(self.write_config({**SMALL_EXPERIMENT, 'output_dir': 'parallel'}))
        parallel = ExperimentService.run_experiment(config)
        with self.settings(TUNE_WORKERS=1):
            sequential = ExperimentService.run_experiment(config.model_copy(update={'output_dir': self.root / 'seq'}))
        self.assertEqual(parallel.model_dump_json(), sequential.model_dump_json())

    def test_report_cross_checks(self):
        config = load_experiment_config(self.write_config({**SMALL_EXPERIMENT, 'output_dir': 'out'}))
        report = ExperimentService.run_experiment(config)
        stored = ComparisonReport.model_validate_json((self.root / 'out' / 'report.json').read_text(encoding='utf-8'))
        self.assertEqual(stored, report)
        self.assertEqual([item.algorithm for item in report.algorithms], [BOA, GA, DE])

        plant = get_reference_plant()
        for item in report.algorithms:
            with self.subTest(algorithm=item.algorithm):
                params = LeadLagParams(**item.best_params)
                spectrum = Spectrum.from_values(complex(re, im) for re, im in item.best_spectrum)
                self.assertAlmostEqual(min_damping_ratio(spectrum), item.best_min_damping, delta=1e-9)
                self.assertAlmostEqual(objective(plant, params), item.best_objective, delta=1e-9)
                self.assertEqual(item.best_objective, max(item.final_objectives))
                self.assertEqual(item.worst_objective, min(item.final_objectives))
                self.assertLessEqual(item.worst_objective, item.median_objective)
                self.assertLessEqual(item.median_objective, item.best_objective)
                self.assertEqual(len(item.median_trace), 4)
                self.assertEqual(item.seeds, [0, 1])
        self.assertEqual(report.summary(BOA).evaluation_count, 2 * 6 * 4)
        self.assertEqual(report.summary(GA).evaluation_count, 2 * (6 + 3 * 5))
        self.assertEqual(report.summary(BOA).global_steps + report.summary(BOA).local_steps, 2 * 6 * 3)

    def test_initialization_only(self):
        config = self.write_config({
            'algorithms': {'de': {'generations': 0}},
            'seeds': [5, 6, 7],
        })
        self.run_command(config=str(config), out=str(self.root / 'init'), seed=3)
        report = json.loads((self.root / 'init' / 'report.json').read_text(encoding='utf-8'))
        self.assertEqual(report['seeds'], [3])
        [summary] = report['algorithms']
        self.assertEqual(summary['algorithm'], 'de')
        self.assertEqual(len(summary['median_trace']), 1)
        self.assertEqual(summary['generations_to_within'], [0])
        self.assertEqual(summary['evaluation_count'], 50)
        self.assertEqual(summary['best_objective'], summary['worst_objective'])
        self.assertTrue((self.root / 'init' / 'convergence' / 'de_seed3.csv').exists())
        self.assertFalse((self.root / 'init' / 'convergence' / 'de_seed5.csv').exists())

    def test_median_trace_pads_short_runs(self):
        self.assertEqual(median_trace([(0.1, 0.2, 0.3), (0.0,), (0.2, 0.4)]), [0.1, 0.2, 0.3])


class ConfigErrorsTest(ExperimentTestCase):

    def assertConfigError(self, payload):
        config = self.write_config(payload)
        with self.assertRaises(CommandError) as context:
            self.run_command(config=str(config), out=str(self.root / 'out'))
        self.assertEqual(context.exception.returncode, 1)

    def test_invalid_configs(self):
        invalid = [
            {**SMALL_EXPERIMENT, 'unknown': 1},
            {**SMALL_EXPERIMENT, 'algorithms': {}},
            {**SMALL_EXPERIMENT, 'algorithms': {'pso': {}}},
            {**SMALL_EXPERIMENT, 'seeds': []},
            {**SMALL_EXPERIMENT, 'seeds': [1, 1]},
            {**SMALL_EXPERIMENT, 'seeds': [-1]},
            {**SMALL_EXPERIMENT, 'bounds': {'kc': [50.0, 1.0]}},
            {**SMALL_EXPERIMENT, 'bounds': {'t2': [0.0, 0.1]}},
            {**SMALL_EXPERIMENT, 'algorithms': {'boa': {'switch_probability_p': 2.0}}},
            {**SMALL_EXPERIMENT, 'plant_file': 'missing.json'},
        ]
        for payload in invalid:
            with self.subTest(payload=payload):
                self.assertConfigError(payload)

    def test_population_too_small_is_numerical_failure(self):
        config = self.write_config({**SMALL_EXPERIMENT, 'algorithms': {'de': {'population_size': 3}}})
        with self.assertRaises(CommandError) as context:
            self.run_command(config=str(config), out=str(self.root / 'out'))
        self.assertEqual(context.exception.returncode, 2)
        failure = context.exception.__cause__
        self.assertIsInstance(failure, ExperimentRunError)
        self.assertEqual((failure.algorithm, failure.seed), ('de', 0))

    def test_missing_or_broken_file(self):
        with self.assertRaises(CommandError) as context:
            self.run_command()
        self.assertEqual(context.exception.returncode, 1)
        with self.assertRaises(CommandError) as context:
            self.run_command(config=str(self.root / 'nope.json'))
        self.assertEqual(context.exception.returncode, 1)
        broken = self.root / 'broken.json'
        broken.write_text('[1, 2', encoding='utf-8')
        with self.assertRaises(ConfigError):
            load_experiment_config(broken)

    def test_relative_paths(self):
        plant = self.root / 'plants' / 'plant.json'
        plant.parent.mkdir()
        plant.write_text(REFERENCE_PLANT_FILE.read_text(encoding='utf-8'), encoding='utf-8')
        config = load_experiment_config(self.write_config({
            **SMALL_EXPERIMENT, 'plant_file': 'plants/plant.json', 'output_dir': 'results',
        }))
        self.assertEqual(config.plant_file, plant.resolve())
        self.assertEqual(config.resolved_output_dir(), (self.root / 'results').resolve())


class VerifyTablesTest(ExperimentTestCase):

    def test_reference_plant_passes(self):
        summary = ExperimentService.verify_reference_tables(get_reference_plant())
        self.assertTrue(summary.passed, [check.model_dump() for check in summary.failures])
        self.assertEqual(len(summary.checks), len(REFERENCE_DESIGNS) * 7 + 4)
        open_loop = [check for check in summary.checks if check.design == OPEN_LOOP_DESIGN]
        self.assertEqual([check.quantity for check in open_loop], ['eigenvalue'] * 4)
        self.assertTrue(all(check.error <= OPEN_LOOP_TOLERANCE for check in open_loop))

        output = self.run_command('verify-tables')
        self.assertNotIn('FAIL', output)
        self.assertIn('25', output)

    def test_other_plant_reports_mismatch(self):
        payload = json.loads(REFERENCE_PLANT_FILE.read_text(encoding='utf-8'))
        payload['washout_time_constant'] = 10.0
        summary = ExperimentService.verify_reference_tables(parse_plant(payload))
        self.assertFalse(summary.passed)

        path = self.root / 'plant.json'
        path.write_text(json.dumps({**payload, 'washout_time_constant': 0.5}), encoding='utf-8')
        with self.assertRaises(CommandError) as context:
            self.run_command('verify-tables', plant=str(path))
        self.assertEqual(context.exception.returncode, 3)


class EigCommandTest(ExperimentTestCase):

    def test_open_loop(self):
        output = self.run_command('eig')
        self.assertIn('Разомкнутая система', output)
        self.assertIn('Неустойчивые моды', output)
        self.assertIn('ζ_min = -0.059', output)

    def test_closed_loop(self):
        output = self.run_command('eig', kc=18.3998, t1=0.2619, t2=0.1)
        self.assertIn('Все моды устойчивы', output)
        self.assertIn('ζ_min = 0.477', output)
        self.assertEqual(output.count('i\n'), 6)

    def test_parameter_errors(self):
        with self.assertRaises(CommandError) as context:
            self.run_command('eig', kc=18.0)
        self.assertEqual(context.exception.returncode, 1)
        with self.assertRaises(CommandError) as context:
            self.run_command('eig', kc=18.0, t1=0.2, t2=0.0)
        self.assertEqual(context.exception.returncode, 2)
        with self.assertRaises(CommandError) as context:
            self.run_command('eig', plant=str(self.root / 'missing.json'))
        self.assertEqual(context.exception.returncode, 1)


@tag('slow')
class PublishedExperimentTest(SimpleTestCase):
    """Полная серия: популяция 50, 200 поколений, 20 seed; один прогон на все проверки"""

    published = {BOA: 0.4712, GA: 0.4772, DE: 0.4772}

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        directory = tempfile.TemporaryDirectory()
        cls.addClassCleanup(directory.cleanup)
        cls.output_dir = Path(directory.name) / 'full'
        config = load_experiment_config(
            Path(__file__).resolve().parent.parent / 'configs' / 'reference_experiment.json',
            output_dir=cls.output_dir,
        )
        cls.report = ExperimentService.run_experiment(config)

    def traces(self, item):
        for seed in item.seeds:
            path = self.output_dir / 'convergence' / f'{item.algorithm}_seed{seed}.csv'
            with path.open(encoding='utf-8') as f:
                yield [float(row['best_objective']) for row in csv.DictReader(f)]

    def test_final_objectives_reach_published(self):
        # в области поиска есть ζ_min ≈ 0.671, поэтому верхней границы у финальных значений нет
        for item in self.report.algorithms:
            with self.subTest(algorithm=item.algorithm):
                self.assertGreaterEqual(sum(value >= 0.46 for value in item.final_objectives), 18)
                self.assertGreaterEqual(item.best_objective, self.published[item.algorithm] - 0.005)

    def test_convergence_by_generation_150(self):
        # GA с мутацией 0.05 продолжает улучшаться после 150 поколения
        required = {BOA: 16, GA: 8, DE: 16}
        for item in self.report.algorithms:
            with self.subTest(algorithm=item.algorithm):
                converged = 0
                for values in self.traces(item):
                    self.assertEqual(values, sorted(values))
                    final = values[-1]
                    converged += final - values[150] <= 0.01 * abs(final)
                self.assertGreaterEqual(converged, required[item.algorithm])
