"""
Butterfly Optimization Algorithm (максимизация).

Каждая бабочка излучает аромат f = c * I^a, где I - интенсивность стимула,
выведенная из значения целевой функции. С вероятностью p бабочка делает шаг
к лучшему решению g*, иначе - локальное случайное блуждание между двумя
случайными членами популяции.
"""
import logging

import numpy as np

from .choices import BOA
from .configs import BoaConfig
from .exceptions import NegativeIntensity
from .records import RunRecord
from .space import SearchSpace
from .utils import EliteTracker, evaluate_population

logger = logging.getLogger(__name__)

MIN_INTENSITY = 1e-12


def fragrance(intensity, c: float, a: float):
    """f = c * I^a; принимает число или массив интенсивностей"""
    values = np.asarray(intensity, dtype=float)
    if np.any(values < 0):
        raise NegativeIntensity(f"Интенсивность должна быть неотрицательной, получено {intensity}")
    result = c * values ** a
    return float(result) if result.ndim == 0 else result


def intensity_from_objective(objective_value, floor_shift: float):
    """
    Сдвиг значения цели к положительной интенсивности. floor_shift - минимум
    популяции минус 1, пересчитывается каждое поколение. Принимает число или массив.
    """
    result = np.maximum(MIN_INTENSITY, np.asarray(objective_value, dtype=float) - floor_shift)
    return float(result) if result.ndim == 0 else result


def population_intensities(objective_values) -> np.ndarray:
    values = np.asarray(objective_values, dtype=float)
    return intensity_from_objective(values, values.min() - 1.0)


def boa_global_step(x, g_star, f: float, rng, space: SearchSpace) -> np.ndarray:
    """Шаг к лучшему: x + (r^2 g* - x) f"""
    x = np.asarray(x, dtype=float)
    r = rng.random()
    return space.clip(x + (r * r * np.asarray(g_star) - x) * f)


def boa_local_step(x, x_j, x_k, f: float, rng, space: SearchSpace) -> np.ndarray:
    """Локальное блуждание: x + (r^2 x_j - x_k) f"""
    x = np.asarray(x, dtype=float)
    r = rng.random()
    return space.clip(x + (r * r * np.asarray(x_j) - np.asarray(x_k)) * f)


def run_boa(objective, space: SearchSpace, config: BoaConfig | None = None) -> RunRecord:
    config = config or BoaConfig()
    rng = np.random.default_rng(config.seed)
    size = config.population_size
    c = config.sensory_modality_c
    a = config.power_exponent_a
    p = config.switch_probability_p

    logger.info(f"BOA: популяция {size}, поколений {config.generations}, seed {config.seed}")

    positions = space.sample(rng, size)
    values = evaluate_population(objective, positions)
    evaluations = size
    tracker = EliteTracker(BOA, config.stall_generations)
    tracker.record(positions, values)

    global_steps = 0
    local_steps = 0
    for generation in range(1, config.generations + 1):
        fragrances = fragrance(population_intensities(values), c, a)
        moved = np.empty_like(positions)
        for i in range(size):
            if rng.random() < p:
                moved[i] = boa_global_step(positions[i], tracker.position, fragrances[i], rng, space)
                global_steps += 1
            else:
                j, k = rng.integers(size, size=2)
                moved[i] = boa_local_step(positions[i], positions[j], positions[k], fragrances[i], rng, space)
                local_steps += 1

        # перемещение принимается всегда, g* обновляется только при улучшении
        positions = moved
        values = evaluate_population(objective, positions)
        evaluations += size
        tracker.record(positions, values)
        if tracker.stalled:
            logger.info(f"BOA: нет улучшения {config.stall_generations} поколений, остановка на {generation}")
            break

    record = tracker.to_record(config.seed, evaluations, global_steps, local_steps)
    logger.info(f"BOA: seed {config.seed}, лучшее значение {record.final_best_objective:.6f}")
    return record
