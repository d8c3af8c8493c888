"""
Дифференциальная эволюция DE/rand/1/bin с жадным отбором.
"""
import logging

import numpy as np

from .choices import DE
from .configs import DeConfig
from .exceptions import PopulationTooSmall
from .records import RunRecord
from .space import SearchSpace
from .utils import EliteTracker, evaluate_population

logger = logging.getLogger(__name__)

MIN_POPULATION = 4


def pick_donors(rng: np.random.Generator, size: int, target: int) -> np.ndarray:
    """Три различных индекса, не совпадающих с target"""
    donors = rng.choice(size - 1, size=3, replace=False)
    return donors + (donors >= target)


def reflect_into_bounds(mutant: np.ndarray, target: np.ndarray, space: SearchSpace) -> np.ndarray:
    """Вышедшая за границу компонента ставится посередине между границей и целевым вектором"""
    lower, upper = space.lower_array, space.upper_array
    mutant = np.where(mutant < lower, (lower + target) / 2.0, mutant)
    mutant = np.where(mutant > upper, (upper + target) / 2.0, mutant)
    return space.clip(mutant)


def binomial_crossover(target: np.ndarray, mutant: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    cross = rng.random(len(target)) < rate
    cross[rng.integers(len(target))] = True
    return np.where(cross, mutant, target)


def run_de(objective, space: SearchSpace, config: DeConfig | None = None) -> RunRecord:
    config = config or DeConfig()
    size = config.population_size
    if size < MIN_POPULATION:
        raise PopulationTooSmall(size, MIN_POPULATION)
    rng = np.random.default_rng(config.seed)
    weight = config.differential_weight

    logger.info(f"DE: популяция {size}, поколений {config.generations}, seed {config.seed}")

    positions = space.sample(rng, size)
    values = evaluate_population(objective, positions)
    evaluations = size
    tracker = EliteTracker(DE, config.stall_generations)
    tracker.record(positions, values)

    for generation in range(1, config.generations + 1):
        trials = np.empty_like(positions)
        for i in range(size):
            r1, r2, r3 = pick_donors(rng, size, i)
            mutant = positions[r1] + weight * (positions[r2] - positions[r3])
            mutant = reflect_into_bounds(mutant, positions[i], space)
            trials[i] = binomial_crossover(positions[i], mutant, config.crossover_rate, rng)

        trial_values = evaluate_population(objective, trials)
        evaluations += size
        accepted = trial_values >= values
        positions = np.where(accepted[:, None], trials, positions)
        values = np.where(accepted, trial_values, values)
        tracker.record(positions, values)
        if tracker.stalled:
            logger.info(f"DE: нет улучшения {config.stall_generations} поколений, остановка на {generation}")
            break

    record = tracker.to_record(config.seed, evaluations)
    logger.info(f"DE: seed {config.seed}, лучшее значение {record.final_best_objective:.6f}")
    return record
