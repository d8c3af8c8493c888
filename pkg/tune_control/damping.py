"""
Коэффициент демпфирования собственных чисел и целевая функция ζ_min.
"""
import math
from typing import Iterable, Sequence

from tune_numerics.linalg import Spectrum, eigenvalues

from .closed_loop import LeadLagParams, assemble_closed_loop
from .exceptions import ControlError, EmptySpectrum, ZeroEigenvalue
from .plant import StateSpacePlant


def damping_ratio(eigenvalue: complex) -> float:
    """ζ = -Re λ / |λ|; отрицателен для неустойчивых мод"""
    value = complex(eigenvalue)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ControlError(f"Собственное число должно быть конечным, получено {value}")
    magnitude = abs(value)
    if magnitude == 0.0:
        raise ZeroEigenvalue(value)
    return -value.real / magnitude


def min_damping_ratio(spectrum: Iterable[complex]) -> float:
    ratios = [damping_ratio(value) for value in spectrum]
    if not ratios:
        raise EmptySpectrum("Пустой спектр")
    return min(ratios)


def unstable_modes(spectrum: Spectrum) -> list[complex]:
    """Собственные числа с неотрицательной вещественной частью"""
    return [value for value in spectrum if value.real >= 0.0]


def closed_loop_spectrum(plant: StateSpacePlant, params: LeadLagParams) -> Spectrum:
    return eigenvalues(assemble_closed_loop(plant, params))


def objective(plant: StateSpacePlant, params: LeadLagParams) -> float:
    """ζ_min замкнутой системы; чем больше, тем лучше"""
    return min_damping_ratio(closed_loop_spectrum(plant, params))


class DampingObjective:
    """
    Целевая функция для оптимизаторов: вектор (K, T1, T2) -> ζ_min.
    Сериализуется pickle.
    """

    def __init__(self, plant: StateSpacePlant):
        self.plant = plant

    def __call__(self, position: Sequence[float]) -> float:
        return objective(self.plant, LeadLagParams.from_vector(position))
