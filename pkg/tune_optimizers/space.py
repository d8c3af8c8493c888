import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import InvalidSearchSpace


@dataclass(frozen=True)
class SearchSpace:
    """Прямоугольная область поиска lower <= x <= upper"""
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    dimension_names: tuple[str, ...] = ()

    def __post_init__(self):
        lower = tuple(float(value) for value in self.lower)
        upper = tuple(float(value) for value in self.upper)
        if not lower or len(lower) != len(upper):
            raise InvalidSearchSpace("Границы должны быть непустыми и одинаковой длины")
        names = tuple(self.dimension_names) or tuple(f"x{i + 1}" for i in range(len(lower)))
        if len(names) != len(lower):
            raise InvalidSearchSpace("Число имён измерений не совпадает с числом границ")
        for name, low, high in zip(names, lower, upper):
            if not (math.isfinite(low) and math.isfinite(high) and low < high):
                raise InvalidSearchSpace(f"Для {name} нужно конечное lower < upper, получено [{low}, {high}]")
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)
        object.__setattr__(self, 'dimension_names', names)

    @classmethod
    def cube(cls, low: float, high: float, dimension: int) -> 'SearchSpace':
        return cls(lower=(low,) * dimension, upper=(high,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @cached_property
    def lower_array(self) -> np.ndarray:
        return np.array(self.lower)

    @cached_property
    def upper_array(self) -> np.ndarray:
        return np.array(self.upper)

    @property
    def width(self) -> np.ndarray:
        return self.upper_array - self.lower_array

    def clip(self, position) -> np.ndarray:
        return np.clip(position, self.lower_array, self.upper_array)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """count равномерно распределённых точек, массив count x dimension"""
        points = self.lower_array + rng.random((count, self.dimension)) * self.width
        return self.clip(points)

    def contains(self, position) -> bool:
        position = np.asarray(position, dtype=float)
        return bool(np.all(position >= self.lower_array) and np.all(position <= self.upper_array))
