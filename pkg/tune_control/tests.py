import json
import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from tune_numerics.linalg import Spectrum, eigenvalues

from .closed_loop import LeadLagParams, assemble_closed_loop, lead_lag_search_space
from .damping import (
    DampingObjective,
    closed_loop_spectrum,
    damping_ratio,
    min_damping_ratio,
    objective,
    unstable_modes,
)
from .exceptions import EmptySpectrum, InvalidParams, PlantValidationError, ZeroEigenvalue
from .plant import REFERENCE_PLANT_FILE, get_reference_plant, load_plant, parse_plant

GA_PARAMS = LeadLagParams(18.3998, 0.2619, 0.1)
DE_PARAMS = LeadLagParams(18.402, 0.2618, 0.1)
BOA_PARAMS = LeadLagParams(18.1352, 0.2714, 0.1)

TABLE_SPECTRA = {
    GA_PARAMS: [-18.2, complex(-3.032, 5.5839), complex(-3.032, -5.5839),
                complex(-2.9595, 5.4499), complex(-2.9595, -5.4499), -0.34543],
    DE_PARAMS: [-18.199, complex(-3.0183, 5.5576), complex(-3.0183, -5.5576),
                complex(-2.9737, 5.4754), complex(-2.9737, -5.4754), -0.34544],
    BOA_PARAMS: [-18.296, complex(-3.2845, 6.1484), complex(-3.2845, -6.1484),
                 complex(-2.6591, 4.9738), complex(-2.6591, -4.9738), -0.34519],
}


def plant_payload(**overrides):
    payload = json.loads(REFERENCE_PLANT_FILE.read_text(encoding='utf-8'))
    payload.update(overrides)
    return payload


class PlantLoadingTest(SimpleTestCase):

    def test_reference_plant(self):
        plant = get_reference_plant()
        self.assertEqual(plant.size, 4)
        self.assertEqual(plant.sensed_state, 1)
        self.assertEqual(plant.input_row, 3)
        self.assertEqual(plant.washout_time_constant, 3.0)
        self.assertEqual(plant.b[3, 0], 1000.0)
        self.assertIs(get_reference_plant(), plant)

    def test_load_from_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'plant.json'
            path.write_text(json.dumps(plant_payload(washout_time_constant=5)), encoding='utf-8')
            self.assertEqual(load_plant(path).washout_time_constant, 5.0)

            path.write_text('{not json', encoding='utf-8')
            with self.assertRaises(PlantValidationError):
                load_plant(path)
        with self.assertRaises(PlantValidationError):
            load_plant(Path(directory) / 'missing.json')

    def test_rejects_invalid_documents(self):
        invalid = [
            plant_payload(extra_key=1),
            plant_payload(washout_time_constant=0),
            plant_payload(sensed_state=0),
            plant_payload(input_row=5),
            plant_payload(b=[0.0, 0.0, 1000.0]),
            plant_payload(a=[[0.0, 1.0], [1.0, 0.0], [0.0, 0.0], [1.0, 1.0]]),
            plant_payload(b=[1.0, 0.0, 0.0, 1000.0]),
            plant_payload(input_row=1),
        ]
        for payload in invalid:
            with self.subTest(payload=payload):
                with self.assertRaises(PlantValidationError):
                    parse_plant(payload)


class ClosedLoopTest(SimpleTestCase):

    def setUp(self):
        self.plant = get_reference_plant()

    def test_displayed_entries(self):
        closed = assemble_closed_loop(self.plant, GA_PARAMS)
        kc, t1, t2 = 18.3998, 0.2619, 0.1
        self.assertEqual(closed.shape, (6, 6))
        np.testing.assert_array_equal(closed[:4, :4], self.plant.a)
        self.assertEqual(closed[3, 5], 1000.0)
        self.assertAlmostEqual(closed[5, 5], -10.0, places=12)
        self.assertAlmostEqual(closed[4, 4], -1.0 / 3.0, places=15)
        np.testing.assert_allclose(closed[4], [-0.0587, 0.0, -0.1303, 0.0, -1.0 / 3.0, 0.0])
        np.testing.assert_allclose(closed[5], [
            -0.0587 * kc * t1 / t2, 0.0, -0.1303 * kc * t1 / t2, 0.0,
            kc / t2 - kc * t1 / (3 * t2), -1.0 / t2,
        ], rtol=1e-12)

    def test_zero_gain_decouples_controller(self):
        closed = assemble_closed_loop(self.plant, LeadLagParams(0.0, 0.5, 0.1))
        np.testing.assert_allclose(closed[5], [0, 0, 0, 0, 0, -10.0], atol=0)

    def test_structure_for_random_params(self):
        space = lead_lag_search_space()
        rng = np.random.default_rng(0)
        reference = assemble_closed_loop(self.plant, GA_PARAMS)
        for position in space.sample(rng, 50):
            params = LeadLagParams.from_vector(position)
            closed = assemble_closed_loop(self.plant, params)
            np.testing.assert_array_equal(closed[:3], reference[:3])
            self.assertEqual(closed[4, 4], -1.0 / self.plant.washout_time_constant)
            self.assertEqual(closed[5, 5], -1.0 / params.t2)

    def test_invalid_params(self):
        for t2 in (0.0, -0.1):
            with self.assertRaises(InvalidParams):
                assemble_closed_loop(self.plant, LeadLagParams(10.0, 0.2, t2))
        with self.assertRaises(InvalidParams):
            assemble_closed_loop(self.plant, LeadLagParams(1e308, 1e308, 1e-300))
        with self.assertRaises(InvalidParams):
            LeadLagParams.from_vector([1.0, 2.0])

    def test_reference_spectra(self):
        for params, expected in TABLE_SPECTRA.items():
            spectrum = closed_loop_spectrum(self.plant, params)
            remaining = list(spectrum)
            for value in expected:
                nearest = min(remaining, key=lambda candidate: abs(candidate - value))
                remaining.remove(nearest)
                with self.subTest(params=params, eigenvalue=value):
                    self.assertAlmostEqual(nearest.real, complex(value).real, delta=1e-2)
                    self.assertAlmostEqual(nearest.imag, complex(value).imag, delta=1e-2)


class DampingRatioTest(SimpleTestCase):

    def test_examples(self):
        self.assertAlmostEqual(damping_ratio(complex(-3.032, 5.5839)), 0.4772, delta=1e-4)
        self.assertEqual(damping_ratio(-1 + 0j), 1.0)
        self.assertEqual(damping_ratio(4j), 0.0)
        self.assertAlmostEqual(damping_ratio(complex(-2.6591, 4.9738)), 0.4715, delta=5e-4)
        self.assertLess(damping_ratio(complex(0.5, 2.0)), 0.0)
        with self.assertRaises(ZeroEigenvalue):
            damping_ratio(0j)

    def test_properties(self):
        rng = np.random.default_rng(8)
        for _ in range(10_000):
            value = complex(-rng.uniform(1e-3, 50.0), rng.uniform(-50.0, 50.0))
            ratio = damping_ratio(value)
            angle_form = math.cos(math.atan(value.imag / -value.real))
            self.assertLessEqual(abs(ratio - angle_form), 1e-12)
            self.assertEqual(ratio, damping_ratio(value.conjugate()))
            scale = rng.uniform(1e-3, 1e3)
            self.assertLessEqual(abs(damping_ratio(scale * value) - ratio), 1e-12)
            self.assertTrue(-1.0 <= ratio <= 1.0)

    def test_min_damping_ratio(self):
        self.assertEqual(min_damping_ratio(Spectrum.from_values([-1, -2, -3])), 1.0)
        spectrum = closed_loop_spectrum(get_reference_plant(), GA_PARAMS)
        self.assertAlmostEqual(min_damping_ratio(spectrum), 0.4772, delta=1e-3)
        with self.assertRaises(EmptySpectrum):
            min_damping_ratio(Spectrum(()))
        with self.assertRaises(ZeroEigenvalue):
            min_damping_ratio(Spectrum.from_values([-1, 0]))

    def test_open_loop_is_unstable(self):
        spectrum = eigenvalues(get_reference_plant().a)
        expected = -0.2954 / math.hypot(0.2954, 4.9577)
        self.assertAlmostEqual(min_damping_ratio(spectrum), expected, delta=1e-3)
        modes = unstable_modes(spectrum)
        self.assertEqual(len(modes), 2)
        for mode in modes:
            self.assertAlmostEqual(mode.real, 0.2954, delta=1e-3)

    def test_stability_matches_sign(self):
        rng = np.random.default_rng(4)
        for _ in range(500):
            m = rng.uniform(-1.0, 1.0, size=(5, 5)) - rng.uniform(0.0, 1.5) * np.eye(5)
            spectrum = eigenvalues(m)
            stable = all(value.real < 0 for value in spectrum)
            self.assertEqual(min_damping_ratio(spectrum) > 0, stable)


class ObjectiveTest(SimpleTestCase):

    def test_reference_designs(self):
        plant = get_reference_plant()
        self.assertAlmostEqual(objective(plant, GA_PARAMS), 0.4772, delta=1e-3)
        self.assertAlmostEqual(objective(plant, BOA_PARAMS), 0.4712, delta=1e-3)
        self.assertAlmostEqual(objective(plant, DE_PARAMS), 0.4772, delta=1e-3)

    def test_callable_objective(self):
        plant = get_reference_plant()
        target = DampingObjective(plant)
        self.assertEqual(target([18.3998, 0.2619, 0.1]), objective(plant, GA_PARAMS))
        self.assertEqual(target(np.array([18.3998, 0.2619, 0.1])), target([18.3998, 0.2619, 0.1]))

    def test_search_space_defaults(self):
        space = lead_lag_search_space()
        self.assertEqual(space.lower, (1.0, 0.1, 0.01))
        self.assertEqual(space.upper, (50.0, 1.0, 0.1))
        self.assertEqual(space.dimension_names, ('kc', 't1', 't2'))
        self.assertEqual(lead_lag_search_space({'kc': (2.0, 30.0)}).lower[0], 2.0)
