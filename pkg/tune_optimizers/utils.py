import logging
import math

import numpy as np

from .exceptions import ObjectiveEvaluationError
from .records import RunRecord
from .signals import generation_completed

logger = logging.getLogger(__name__)


def evaluate(objective, position) -> float:
    """Значение целевой функции; любая ошибка получает координаты точки"""
    try:
        value = float(objective(position))
    except Exception as e:
        raise ObjectiveEvaluationError(position, f"Ошибка целевой функции: {e}") from e
    if not math.isfinite(value):
        raise ObjectiveEvaluationError(position, f"Целевая функция вернула {value}")
    return value


def evaluate_population(objective, positions: np.ndarray) -> np.ndarray:
    return np.array([evaluate(objective, position) for position in positions], dtype=float)


class EliteTracker:
    """
    Лучшее найденное решение и история лучших значений по поколениям.
    Обновляется только при строгом улучшении: при равенстве остаётся найденное раньше.
    """

    def __init__(self, algorithm: str, stall_generations: int | None = None):
        self.algorithm = algorithm
        self.stall_generations = stall_generations
        self.position = None
        self.value = -math.inf
        self.trace = []
        self._stall = 0

    def record(self, positions: np.ndarray, values: np.ndarray) -> None:
        generation = len(self.trace)
        index = int(np.argmax(values))
        if values[index] > self.value:
            self.value = float(values[index])
            self.position = positions[index].copy()
            self._stall = 0
        elif generation > 0:
            self._stall += 1
        self.trace.append(self.value)

        generation_completed.send(
            sender=self.algorithm,
            generation=generation,
            positions=positions.copy(),
            objective_values=values.copy(),
            best_objective=self.value,
        )
        logger.debug(f"{self.algorithm}: поколение {generation}, лучшее {self.value:.6f}")

    @property
    def stalled(self) -> bool:
        return self.stall_generations is not None and self._stall >= self.stall_generations

    def to_record(self, seed: int, evaluation_count: int, global_steps: int = 0, local_steps: int = 0) -> RunRecord:
        return RunRecord(
            algorithm=self.algorithm,
            seed=seed,
            best_objective_per_generation=tuple(self.trace),
            final_best_position=tuple(float(value) for value in self.position),
            final_best_objective=self.value,
            evaluation_count=evaluation_count,
            global_steps=global_steps,
            local_steps=local_steps,
        )
