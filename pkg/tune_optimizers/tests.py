import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, tag
from pydantic import ValidationError

from . import boa
from .boa import (
    boa_global_step,
    boa_local_step,
    fragrance,
    intensity_from_objective,
    population_intensities,
    run_boa,
)
from .choices import ALGORITHM_ORDER, BOA, DE, GA
from .configs import BoaConfig, DeConfig, GaConfig
from .de import binomial_crossover, pick_donors, reflect_into_bounds, run_de
from .exceptions import (
    InvalidSearchSpace,
    NegativeIntensity,
    ObjectiveEvaluationError,
    OptimizerError,
    PopulationTooSmall,
)
from .ga import arithmetic_crossover, tournament, run_ga
from .records import generations_to_within
from .services import OptimizationService
from .signals import generation_completed
from .space import SearchSpace

SPHERE_OPTIMUM = np.array([1.5, -2.0, 0.5])
SPHERE_SPACE = SearchSpace.cube(-5.0, 5.0, 3)


def shifted_sphere(position):
    return -float(np.sum((np.asarray(position) - SPHERE_OPTIMUM) ** 2))


class FixedRandom:
    """Подставной генератор: random() всегда возвращает одно значение"""

    def __init__(self, value):
        self.value = value

    def random(self):
        return self.value


class GenerationRecorder:
    """Сохраняет всё, что присылает generation_completed"""

    def __init__(self, test_case):
        self.events = []
        generation_completed.connect(self, weak=False)
        test_case.addCleanup(generation_completed.disconnect, self)

    def __call__(self, sender, **kwargs):
        self.events.append((sender, kwargs))


class SearchSpaceTest(SimpleTestCase):

    def test_invalid_bounds(self):
        for lower, upper in [((), ()), ((0.0,), (0.0,)), ((1.0,), (0.0,)), ((0.0, 1.0), (1.0,)),
                             ((0.0,), (math.inf,))]:
            with self.subTest(lower=lower, upper=upper):
                with self.assertRaises(InvalidSearchSpace):
                    SearchSpace(lower, upper)

    def test_sample_and_clip(self):
        space = SearchSpace((1.0, 0.1, 0.01), (50.0, 1.0, 0.1), ('kc', 't1', 't2'))
        points = space.sample(np.random.default_rng(1), 500)
        self.assertEqual(points.shape, (500, 3))
        self.assertTrue(all(space.contains(point) for point in points))
        np.testing.assert_array_equal(space.clip([0.0, 2.0, 0.05]), [1.0, 1.0, 0.05])
        self.assertEqual(SPHERE_SPACE.dimension_names, ('x1', 'x2', 'x3'))


class FragranceTest(SimpleTestCase):

    def test_examples(self):
        self.assertAlmostEqual(fragrance(1.0, 0.01, 0.1), 0.01)
        self.assertEqual(fragrance(0.0, 0.01, 0.1), 0.0)
        self.assertAlmostEqual(fragrance(1024.0, 0.01, 0.1), 0.02)
        np.testing.assert_allclose(fragrance([1.0, 1024.0], 0.01, 0.1), [0.01, 0.02])
        with self.assertRaises(NegativeIntensity):
            fragrance(-1.0, 0.01, 0.1)

    def test_monotone_in_intensity(self):
        intensities = np.sort(np.random.default_rng(2).uniform(0.0, 100.0, 1000))
        values = fragrance(intensities, 0.01, 0.1)
        self.assertTrue(np.all(np.diff(values) >= 0))


class IntensityTest(SimpleTestCase):

    def test_examples(self):
        np.testing.assert_allclose(population_intensities([-0.5, 0.2, 0.4772]), [1.0, 1.7, 1.9772])
        np.testing.assert_allclose(population_intensities([0.3]), [1.0])
        np.testing.assert_allclose(population_intensities([0.7, 0.7, 0.7]), [1.0, 1.0, 1.0])
        self.assertAlmostEqual(intensity_from_objective(0.2, -1.5), 1.7)
        self.assertEqual(intensity_from_objective(-3.0, 0.0), 1e-12)

    def test_population_uses_generation_floor(self):
        values = [-0.5, 0.2, 0.4772, 3.0]
        expected = [intensity_from_objective(value, -1.5) for value in values]
        np.testing.assert_array_equal(population_intensities(values), expected)
        np.testing.assert_array_equal(intensity_from_objective(np.array(values), -1.5), expected)

        with mock.patch.object(boa, 'intensity_from_objective', wraps=intensity_from_objective) as spy:
            run_boa(shifted_sphere, SPHERE_SPACE, BoaConfig(generations=4))
        self.assertEqual(spy.call_count, 4)

    def test_preserves_best_member(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            values = rng.normal(size=20) * rng.uniform(0.01, 100.0)
            intensities = population_intensities(values)
            self.assertTrue(np.all(intensities > 0))
            self.assertEqual(int(np.argmax(intensities)), int(np.argmax(values)))


class BoaStepTest(SimpleTestCase):

    def setUp(self):
        self.space = SearchSpace.cube(-10.0, 10.0, 2)

    def test_global_step(self):
        moved = boa_global_step([0.0, 0.0], [1.0, 1.0], 0.5, FixedRandom(1.0), self.space)
        np.testing.assert_allclose(moved, [0.5, 0.5])
        moved = boa_global_step([2.0, -2.0], [1.0, 1.0], 0.5, FixedRandom(0.0), self.space)
        np.testing.assert_allclose(moved, [1.0, -1.0])

    def test_local_step(self):
        moved = boa_local_step([1.0, 1.0], [2.0, 2.0], [1.0, 1.0], 1.0, FixedRandom(0.5), self.space)
        np.testing.assert_allclose(moved, [0.5, 0.5])

    def test_steps_are_clipped(self):
        moved = boa_global_step([9.0, -9.0], [10.0, -10.0], 50.0, FixedRandom(1.0), self.space)
        np.testing.assert_array_equal(moved, [10.0, -10.0])


class CrossoverAndSelectionTest(SimpleTestCase):

    def test_arithmetic_crossover(self):
        child_a, child_b = arithmetic_crossover(np.array([0.0, 4.0]), np.array([2.0, 0.0]), 0.25)
        np.testing.assert_allclose(child_a, [1.5, 1.0])
        np.testing.assert_allclose(child_b, [0.5, 3.0])

    def test_tournament_prefers_better(self):
        rng = np.random.default_rng(5)
        values = np.array([0.0, 1.0, 2.0, 3.0])
        winners = [tournament(rng, values) for _ in range(2000)]
        self.assertGreater(winners.count(3), winners.count(0))
        self.assertEqual(tournament(rng, np.zeros(1)), 0)

    def test_pick_donors(self):
        rng = np.random.default_rng(6)
        for target in range(5):
            for _ in range(200):
                donors = pick_donors(rng, 5, target)
                self.assertEqual(len(set(donors.tolist())), 3)
                self.assertNotIn(target, donors.tolist())
                self.assertTrue(all(0 <= donor < 5 for donor in donors))

    def test_reflect_into_bounds(self):
        space = SearchSpace.cube(0.0, 1.0, 2)
        reflected = reflect_into_bounds(np.array([-3.0, 7.0]), np.array([0.4, 0.6]), space)
        np.testing.assert_allclose(reflected, [0.2, 0.8])

    def test_binomial_crossover_keeps_one_mutant_gene(self):
        rng = np.random.default_rng(7)
        target, mutant = np.zeros(4), np.ones(4)
        for _ in range(100):
            trial = binomial_crossover(target, mutant, 0.0, rng)
            self.assertEqual(int(trial.sum()), 1)
        np.testing.assert_array_equal(binomial_crossover(target, mutant, 1.0, rng), mutant)


class RunnerContractTest(SimpleTestCase):
    """Общие свойства всех трёх алгоритмов"""

    def configs(self, **fields):
        return {
            BOA: BoaConfig(**fields),
            GA: GaConfig(**fields),
            DE: DeConfig(**fields),
        }

    def test_zero_generations(self):
        for algorithm, config in self.configs(generations=0).items():
            with self.subTest(algorithm=algorithm):
                record = OptimizationService.run(algorithm, shifted_sphere, SPHERE_SPACE, config)
                self.assertEqual(record.evaluation_count, 50)
                self.assertEqual(record.generations_run, 0)
                self.assertEqual(len(record.best_objective_per_generation), 1)
                self.assertEqual(record.final_best_objective, shifted_sphere(record.final_best_position))

    def test_seed_determinism(self):
        for algorithm, config in self.configs(generations=15, seed=11).items():
            with self.subTest(algorithm=algorithm):
                first = OptimizationService.run(algorithm, shifted_sphere, SPHERE_SPACE, config)
                second = OptimizationService.run(algorithm, shifted_sphere, SPHERE_SPACE, config)
                self.assertEqual(first, second)

    def test_positions_stay_in_bounds(self):
        recorder = GenerationRecorder(self)
        # оптимум у самой границы, чтобы шаги чаще выходили наружу
        edge_space = SearchSpace.cube(-2.0, 1.5, 3)
        for algorithm, config in self.configs(generations=30, seed=2).items():
            OptimizationService.run(algorithm, shifted_sphere, edge_space, config)
        self.assertEqual(len(recorder.events), 3 * 31)
        for sender, event in recorder.events:
            with self.subTest(algorithm=sender, generation=event['generation']):
                self.assertTrue(all(edge_space.contains(position) for position in event['positions']))
                self.assertEqual(event['best_objective'], max(
                    e['best_objective'] for s, e in recorder.events
                    if s == sender and e['generation'] <= event['generation']
                ))

    def test_trace_is_non_decreasing(self):
        for algorithm, config in self.configs(generations=40, seed=5).items():
            with self.subTest(algorithm=algorithm):
                record = OptimizationService.run(algorithm, shifted_sphere, SPHERE_SPACE, config)
                trace = record.best_objective_per_generation
                self.assertEqual(len(trace), 41)
                self.assertTrue(all(later >= earlier for earlier, later in zip(trace, trace[1:])))
                self.assertEqual(trace[-1], record.final_best_objective)

    def test_evaluation_counts(self):
        records = {
            algorithm: OptimizationService.run(algorithm, shifted_sphere, SPHERE_SPACE, config)
            for algorithm, config in self.configs(generations=10, population_size=20).items()
        }
        self.assertEqual(records[BOA].evaluation_count, 20 * 11)
        self.assertEqual(records[DE].evaluation_count, 20 * 11)
        self.assertEqual(records[GA].evaluation_count, 20 + 10 * 19)

    def test_stall_generations(self):
        for algorithm, config in self.configs(generations=50, stall_generations=3).items():
            with self.subTest(algorithm=algorithm):
                record = OptimizationService.run(algorithm, lambda position: 0.0, SPHERE_SPACE, config)
                self.assertEqual(record.generations_run, 3)

    def test_objective_errors_carry_position(self):
        def failing(position):
            if position[0] > 0:
                raise ValueError("domain")
            return 0.0

        for algorithm, config in self.configs(generations=5).items():
            with self.subTest(algorithm=algorithm):
                with self.assertRaises(ObjectiveEvaluationError) as context:
                    OptimizationService.run(algorithm, failing, SPHERE_SPACE, config)
                self.assertEqual(len(context.exception.position), 3)
                self.assertGreater(context.exception.position[0], 0)

        with self.assertRaises(ObjectiveEvaluationError):
            run_de(lambda position: math.nan, SPHERE_SPACE, DeConfig(generations=1))


class BoaRunTest(SimpleTestCase):

    def test_switch_probability_extremes(self):
        record = run_boa(shifted_sphere, SPHERE_SPACE, BoaConfig(generations=8, switch_probability_p=1.0))
        self.assertEqual((record.global_steps, record.local_steps), (400, 0))
        record = run_boa(shifted_sphere, SPHERE_SPACE, BoaConfig(generations=8, switch_probability_p=0.0))
        self.assertEqual((record.global_steps, record.local_steps), (0, 400))

    def test_mixed_steps_add_up(self):
        record = run_boa(shifted_sphere, SPHERE_SPACE, BoaConfig(generations=20, seed=3))
        self.assertEqual(record.global_steps + record.local_steps, 50 * 20)
        self.assertGreater(record.global_steps, record.local_steps)


class GaRunTest(SimpleTestCase):

    def test_selection_only_collapses_to_elite(self):
        recorder = GenerationRecorder(self)
        config = GaConfig(population_size=10, generations=150, mutation_probability=0.0,
                          crossover_probability=0.0, seed=4)
        record = run_ga(shifted_sphere, SPHERE_SPACE, config)
        self.assertEqual(len(set(record.best_objective_per_generation)), 1)
        final_positions = recorder.events[-1][1]['positions']
        for position in final_positions:
            np.testing.assert_array_equal(position, record.final_best_position)

    def test_elite_kept_at_front(self):
        recorder = GenerationRecorder(self)
        run_ga(shifted_sphere, SPHERE_SPACE, GaConfig(generations=10, seed=9))
        for (_, previous), (_, event) in zip(recorder.events, recorder.events[1:]):
            self.assertEqual(event['objective_values'][0], previous['best_objective'])

    def test_improves_on_sphere(self):
        record = run_ga(shifted_sphere, SPHERE_SPACE, GaConfig(seed=1))
        self.assertLess(np.linalg.norm(np.array(record.final_best_position) - SPHERE_OPTIMUM), 0.25)


class DeRunTest(SimpleTestCase):

    def test_population_too_small(self):
        with self.assertRaises(PopulationTooSmall) as context:
            run_de(shifted_sphere, SPHERE_SPACE, DeConfig(population_size=3))
        self.assertEqual(context.exception.minimum, 4)

    def test_converges_on_sphere(self):
        record = run_de(shifted_sphere, SPHERE_SPACE, DeConfig(seed=0))
        self.assertLess(np.linalg.norm(np.array(record.final_best_position) - SPHERE_OPTIMUM), 0.01)

    def test_zero_weight_copies_donor(self):
        # при F = 0 и CR = 0 пробный вектор - цель с одной координатой донора
        recorder = GenerationRecorder(self)
        run_de(shifted_sphere, SPHERE_SPACE, DeConfig(generations=20, differential_weight=0.0, crossover_rate=0.0))
        initial = recorder.events[0][1]['positions']
        final = recorder.events[-1][1]['positions']
        initial_values = set(initial.ravel().tolist())
        self.assertTrue(set(final.ravel().tolist()) <= initial_values)


class ServiceTest(SimpleTestCase):

    def test_config_validation(self):
        self.assertEqual(OptimizationService.default_config(DE, population_size=10).population_size, 10)
        with self.assertRaises(OptimizerError):
            OptimizationService.default_config('pso')
        with self.assertRaises(OptimizerError):
            OptimizationService.run('pso', shifted_sphere, SPHERE_SPACE)
        with self.assertRaises(OptimizerError):
            OptimizationService.run(BOA, shifted_sphere, SPHERE_SPACE, GaConfig())
        for invalid in ({'switch_probability_p': 1.5}, {'sensory_modality_c': 0.0}, {'unknown': 1}):
            with self.assertRaises(ValidationError):
                BoaConfig(**invalid)
        with self.assertRaises(ValidationError):
            GaConfig(population_size=1)

    def test_generations_to_within(self):
        self.assertEqual(generations_to_within([0.0, 0.5, 0.9, 1.0], 0.1), 2)
        self.assertEqual(generations_to_within([1.0, 1.0], 0.0), 0)
        self.assertEqual(generations_to_within([-2.0, -1.0], 0.01), 1)


@tag('slow')
class SphereAcceptanceTest(SimpleTestCase):
    """20 запусков на сфере: сколько из них попадает в окрестность оптимума"""

    thresholds = {BOA: 0.05, GA: 0.05, DE: 0.01}
    required_hits = {BOA: 12, GA: 18, DE: 18}
    # при c = 0.01 шаг BOA слишком мал, на сфере используется c = 1.0
    overrides = {BOA: {'sensory_modality_c': 1.0}, GA: {}, DE: {}}

    def test_all_algorithms(self):
        for algorithm in ALGORITHM_ORDER:
            hits = 0
            for seed in range(20):
                config = OptimizationService.default_config(algorithm, seed=seed, **self.overrides[algorithm])
                record = OptimizationService.run(algorithm, shifted_sphere, SPHERE_SPACE, config)
                distance = np.linalg.norm(np.array(record.final_best_position) - SPHERE_OPTIMUM)
                hits += distance < self.thresholds[algorithm]
            with self.subTest(algorithm=algorithm):
                self.assertGreaterEqual(hits, self.required_hits[algorithm])
