"""
Вещественный генетический алгоритм: бинарный турнир, арифметическое
скрещивание, равномерная мутация генов внутри границ, один элитный потомок.
"""
import logging

import numpy as np

from .choices import GA
from .configs import GaConfig
from .records import RunRecord
from .space import SearchSpace
from .utils import EliteTracker, evaluate_population

logger = logging.getLogger(__name__)


def tournament(rng: np.random.Generator, values: np.ndarray) -> int:
    """Бинарный турнир; при равенстве побеждает меньший индекс"""
    first, second = (int(index) for index in rng.integers(len(values), size=2))
    if values[first] > values[second]:
        return first
    if values[second] > values[first]:
        return second
    return min(first, second)


def arithmetic_crossover(parent_a: np.ndarray, parent_b: np.ndarray, coefficient: float):
    child_a = coefficient * parent_a + (1.0 - coefficient) * parent_b
    child_b = (1.0 - coefficient) * parent_a + coefficient * parent_b
    return child_a, child_b


def mutate(child: np.ndarray, rng: np.random.Generator, space: SearchSpace, probability: float) -> np.ndarray:
    """Каждый ген с вероятностью probability заменяется случайным значением из границ"""
    mask = rng.random(space.dimension) < probability
    resampled = space.sample(rng, 1)[0]
    return np.where(mask, resampled, child)


def run_ga(objective, space: SearchSpace, config: GaConfig | None = None) -> RunRecord:
    config = config or GaConfig()
    rng = np.random.default_rng(config.seed)
    size = config.population_size

    logger.info(f"GA: популяция {size}, поколений {config.generations}, seed {config.seed}")

    positions = space.sample(rng, size)
    values = evaluate_population(objective, positions)
    evaluations = size
    tracker = EliteTracker(GA, config.stall_generations)
    tracker.record(positions, values)

    for generation in range(1, config.generations + 1):
        elite = int(np.argmax(values))
        children = []
        while len(children) < size - 1:
            parent_a = positions[tournament(rng, values)]
            parent_b = positions[tournament(rng, values)]
            if rng.random() < config.crossover_probability:
                pair = arithmetic_crossover(parent_a, parent_b, config.crossover_coefficient)
            else:
                pair = (parent_a.copy(), parent_b.copy())
            for child in pair:
                child = mutate(child, rng, space, config.mutation_probability)
                children.append(space.clip(child))
        children = np.array(children[:size - 1])

        child_values = evaluate_population(objective, children)
        evaluations += len(children)
        # элита переходит в новое поколение с уже известным значением
        positions = np.vstack([positions[elite][None, :], children])
        values = np.concatenate([[values[elite]], child_values])
        tracker.record(positions, values)
        if tracker.stalled:
            logger.info(f"GA: нет улучшения {config.stall_generations} поколений, остановка на {generation}")
            break

    record = tracker.to_record(config.seed, evaluations)
    logger.info(f"GA: seed {config.seed}, лучшее значение {record.final_best_objective:.6f}")
    return record
