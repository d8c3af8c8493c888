from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class RunRecord:
    """
    Итог одного запуска. best_objective_per_generation[0] - лучшее значение
    после инициализации, далее по одному значению на поколение.
    """
    algorithm: str
    seed: int
    best_objective_per_generation: tuple[float, ...]
    final_best_position: tuple[float, ...]
    final_best_objective: float
    evaluation_count: int
    global_steps: int = 0
    local_steps: int = 0

    @property
    def generations_run(self) -> int:
        return len(self.best_objective_per_generation) - 1


def generations_to_within(trace: Sequence[float], tolerance: float) -> int:
    """Первое поколение, где лучшее значение отстаёт от финального не более чем на tolerance * |final|"""
    final = trace[-1]
    gap = tolerance * abs(final)
    for generation, value in enumerate(trace):
        if final - value <= gap:
            return generation
    return len(trace) - 1
