"""
Замкнутая система: объект + washout + lead-lag регулятор K(1 + sT1)/(1 + sT2).

Вектор состояния замкнутой системы z = [x_1..x_n, x_w, u], где x_w - выход washout.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tune_numerics.linalg import Matrix
from tune_optimizers.space import SearchSpace

from .exceptions import InvalidParams
from .plant import StateSpacePlant

LEAD_LAG_DIMENSIONS = ('kc', 't1', 't2')
DEFAULT_LEAD_LAG_BOUNDS = {
    'kc': (1.0, 50.0),
    't1': (0.1, 1.0),
    't2': (0.01, 0.1),
}


@dataclass(frozen=True)
class LeadLagParams:
    kc: float
    t1: float
    t2: float

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> 'LeadLagParams':
        values = [float(value) for value in vector]
        if len(values) != len(LEAD_LAG_DIMENSIONS):
            raise InvalidParams(f"Ожидалось 3 параметра (K, T1, T2), получено {len(values)}")
        return cls(*values)

    def as_vector(self) -> np.ndarray:
        return np.array([self.kc, self.t1, self.t2], dtype=float)

    def as_dict(self) -> dict:
        return {'kc': self.kc, 't1': self.t1, 't2': self.t2}


def lead_lag_search_space(bounds: dict | None = None) -> SearchSpace:
    """Прямоугольник допустимых (K, T1, T2); отсутствующие границы берутся по умолчанию"""
    bounds = {**DEFAULT_LEAD_LAG_BOUNDS, **(bounds or {})}
    return SearchSpace(
        lower=tuple(bounds[name][0] for name in LEAD_LAG_DIMENSIONS),
        upper=tuple(bounds[name][1] for name in LEAD_LAG_DIMENSIONS),
        dimension_names=LEAD_LAG_DIMENSIONS,
    )


def assemble_closed_loop(plant: StateSpacePlant, params: LeadLagParams) -> Matrix:
    """
    Матрица замкнутой системы размера (n + 2) x (n + 2).

    Строка washout: x_w' = (A x + B u)[sensed_state] - x_w / T_w.
    Строка регулятора: u' = (K T1 / T2) x_w' + (K / T2) x_w - u / T2.
    """
    if not params.t2 > 0:
        raise InvalidParams(f"T2 должна быть положительной, получено {params.t2}")

    size = plant.size
    washout = size
    control = size + 1
    lead_gain = params.kc * params.t1 / params.t2

    closed = np.zeros((size + 2, size + 2))
    closed[:size, :size] = plant.a
    closed[:size, control] = plant.b[:, 0]

    closed[washout, :size] = plant.a[plant.sensed_state]
    closed[washout, washout] = -1.0 / plant.washout_time_constant
    closed[washout, control] = plant.b[plant.sensed_state, 0]

    closed[control] = lead_gain * closed[washout]
    closed[control, washout] += params.kc / params.t2
    closed[control, control] -= 1.0 / params.t2

    if not np.all(np.isfinite(closed)):
        raise InvalidParams(f"Матрица замкнутой системы содержит NaN/Inf для {params}")
    return closed
