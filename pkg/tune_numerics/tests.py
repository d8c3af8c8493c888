from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from . import linalg
from .exceptions import ConvergenceFailure, MatrixTooLarge, NonFiniteMatrix, NonSquareMatrix
from .linalg import Spectrum, determinant, eigenvalues, trace

PLANT_A = [
    [0.0, 377.0, 0.0, 0.0],
    [-0.0587, 0.0, -0.1303, 0.0],
    [-0.0899, 0.0, -0.1956, 0.1289],
    [95.605, 0.0, -816.0862, -20.0],
]


def match_error(found, expected):
    """Максимальное расстояние при жадном сопоставлении ближайших собственных чисел"""
    remaining = list(found)
    worst = 0.0
    for value in expected:
        distances = [abs(value - candidate) for candidate in remaining]
        index = int(np.argmin(distances))
        worst = max(worst, distances[index])
        remaining.pop(index)
    return worst


def has_conjugate_closure(spectrum, tolerance=1e-9):
    pending = [value for value in spectrum if value.imag != 0.0]
    while pending:
        value = pending.pop(0)
        target = value.conjugate()
        distances = [abs(target - other) for other in pending]
        if not distances:
            return False
        index = int(np.argmin(distances))
        if distances[index] > tolerance * max(1.0, abs(value)):
            return False
        pending.pop(index)
    return True


class EigenvaluesExamplesTest(SimpleTestCase):

    def test_identity(self):
        spectrum = eigenvalues(np.eye(2))
        self.assertEqual(spectrum.eigenvalues, (1 + 0j, 1 + 0j))

    def test_rotation(self):
        spectrum = eigenvalues([[0.0, 1.0], [-1.0, 0.0]])
        self.assertEqual(len(spectrum), 2)
        self.assertAlmostEqual(spectrum[0].real, 0.0, places=12)
        self.assertAlmostEqual(spectrum[0].imag, -1.0, places=12)
        self.assertAlmostEqual(spectrum[1].imag, 1.0, places=12)

    def test_open_loop_plant(self):
        spectrum = eigenvalues(PLANT_A)
        expected = [
            complex(-10.3932, 3.2910), complex(-10.3932, -3.2910),
            complex(0.2954, 4.9577), complex(0.2954, -4.9577),
        ]
        for value, reference in zip(spectrum, sorted(expected, key=lambda v: (v.real, v.imag))):
            self.assertAlmostEqual(value.real, reference.real, delta=1e-3)
            self.assertAlmostEqual(value.imag, reference.imag, delta=1e-3)

    def test_sorted_by_real_then_imaginary(self):
        spectrum = eigenvalues(np.diag([3.0, -1.0, 2.0]))
        self.assertEqual([value.real for value in spectrum], [-1.0, 2.0, 3.0])

    def test_random_six_by_six_characteristic_residual(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            m = rng.uniform(-1.0, 1.0, size=(6, 6))
            bound = 1e-6 * np.linalg.norm(m) ** 6
            for value in eigenvalues(m):
                residual = abs(np.linalg.det(m - value * np.eye(6)))
                self.assertLess(residual, bound)

    def test_matches_numpy(self):
        rng = np.random.default_rng(11)
        m = rng.normal(size=(8, 8))
        self.assertLess(match_error(eigenvalues(m), np.linalg.eigvals(m)), 1e-9)

    def test_defective_and_zero_matrices(self):
        self.assertEqual(eigenvalues(np.zeros((3, 3))).eigenvalues, (0j, 0j, 0j))
        jordan = [[2.0, 1.0], [0.0, 2.0]]
        self.assertEqual(eigenvalues(jordan).eigenvalues, (2 + 0j, 2 + 0j))

    def test_errors(self):
        with self.assertRaises(NonSquareMatrix):
            eigenvalues(np.ones((2, 3)))
        with self.assertRaises(NonFiniteMatrix):
            eigenvalues([[np.nan, 0.0], [0.0, 1.0]])
        with self.assertRaises(MatrixTooLarge):
            eigenvalues(np.zeros((65, 65)))

    def test_iteration_budget(self):
        m = np.random.default_rng(3).normal(size=(5, 5))
        with mock.patch.object(linalg, 'SWEEPS_PER_EIGENVALUE', 0):
            with self.assertRaises(ConvergenceFailure):
                eigenvalues(m)

    def test_overflow_reports_broken_roots(self):
        # w = 1e400 переполняется, корни блока 2x2 становятся Inf/NaN
        with self.assertRaises(ConvergenceFailure) as context:
            eigenvalues([[0.0, 1e200], [1e200, 0.0]])
        self.assertEqual(context.exception.remaining, 2)
        self.assertEqual(context.exception.sweeps, 0)


class EigenvaluesPropertiesTest(SimpleTestCase):

    def test_trace_determinant_and_conjugate_pairs(self):
        rng = np.random.default_rng(2024)
        for index in range(1000):
            size = 1 + index % 8
            m = rng.uniform(-1.0, 1.0, size=(size, size))
            spectrum = eigenvalues(m)
            values = spectrum.as_array()
            self.assertEqual(len(spectrum), size)

            expected_trace = trace(m)
            self.assertLessEqual(abs(values.sum() - expected_trace), 1e-8 * (1 + abs(expected_trace)))

            expected_det = determinant(m)
            self.assertLessEqual(abs(np.prod(values) - expected_det), 1e-6 * (1 + abs(expected_det)))

            self.assertTrue(has_conjugate_closure(spectrum))

    def test_similarity_invariance(self):
        rng = np.random.default_rng(99)
        checked = 0
        while checked < 200:
            size = 2 + checked % 7
            m = rng.uniform(-1.0, 1.0, size=(size, size))
            p = np.eye(size) + 0.3 * rng.uniform(-1.0, 1.0, size=(size, size))
            if np.linalg.cond(p) >= 1e3:
                continue
            similar = np.linalg.solve(p, m @ p)
            self.assertLess(match_error(eigenvalues(similar), eigenvalues(m)), 1e-6)
            checked += 1

    def test_triangular_exactness(self):
        rng = np.random.default_rng(5)
        for size in range(1, 9):
            m = np.triu(rng.uniform(-5.0, 5.0, size=(size, size)))
            spectrum = eigenvalues(m)
            for value in spectrum:
                self.assertEqual(value.imag, 0.0)
            expected = sorted(np.diag(m))
            for value, diagonal in zip(spectrum, expected):
                self.assertLessEqual(abs(value.real - diagonal), 1e-12)


class TraceDeterminantTest(SimpleTestCase):

    def test_trace(self):
        self.assertEqual(trace(np.eye(3)), 3.0)
        self.assertEqual(trace(np.zeros((4, 4))), 0.0)
        self.assertAlmostEqual(trace(PLANT_A), -20.1956, places=10)
        with self.assertRaises(NonSquareMatrix):
            trace(np.ones((3, 2)))

    def test_determinant(self):
        self.assertEqual(determinant(np.eye(4)), 1.0)
        self.assertEqual(determinant([[2.0, 0.0], [0.0, 3.0]]), 6.0)
        self.assertAlmostEqual(determinant([[1.0, 2.0], [2.0, 4.0]]), 0.0, delta=1e-12)
        self.assertAlmostEqual(determinant([[0.0, 1.0], [1.0, 0.0]]), -1.0, places=14)
        with self.assertRaises(NonSquareMatrix):
            determinant(np.ones((1, 2)))

    def test_determinant_matches_numpy(self):
        m = np.random.default_rng(1).normal(size=(6, 6))
        self.assertAlmostEqual(determinant(m), np.linalg.det(m), places=10)


class SpectrumTest(SimpleTestCase):

    def test_from_values_sorts(self):
        spectrum = Spectrum.from_values([1 + 2j, -3, 1 - 2j])
        self.assertEqual(spectrum.eigenvalues, (-3 + 0j, 1 - 2j, 1 + 2j))
        self.assertEqual(spectrum.to_pairs(), [[-3.0, 0.0], [1.0, -2.0], [1.0, 2.0]])
