"""
Схемы файла эксперимента и итогового отчёта.
"""
import json
from pathlib import Path
from typing import Annotated

from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from tune_control.closed_loop import DEFAULT_LEAD_LAG_BOUNDS, lead_lag_search_space
from tune_control.plant import REFERENCE_PLANT_FILE
from tune_optimizers.choices import ALGORITHM_ORDER
from tune_optimizers.configs import BoaConfig, DeConfig, GaConfig, OptimizerConfig
from tune_optimizers.exceptions import InvalidSearchSpace
from tune_optimizers.space import SearchSpace

from .exceptions import ConfigError

Interval = tuple[float, float]


def default_seeds() -> list[int]:
    return list(getattr(settings, 'TUNE_DEFAULT_SEEDS', range(20)))


class BoundsSchema(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True, allow_inf_nan=False)

    kc: Interval = DEFAULT_LEAD_LAG_BOUNDS['kc']
    t1: Interval = DEFAULT_LEAD_LAG_BOUNDS['t1']
    t2: Interval = DEFAULT_LEAD_LAG_BOUNDS['t2']

    @model_validator(mode='after')
    def check_intervals(self):
        for name in ('kc', 't1', 't2'):
            low, high = getattr(self, name)
            if not low < high:
                raise ValueError(f'для {name} нужно lower < upper, получено [{low}, {high}]')
        if self.t2[0] <= 0:
            raise ValueError('нижняя граница T2 должна быть положительной')
        return self


class AlgorithmsSchema(BaseModel):
    """Запускаемые алгоритмы; отсутствующий ключ - алгоритм не запускается"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    boa: BoaConfig | None = None
    ga: GaConfig | None = None
    de: DeConfig | None = None

    @model_validator(mode='after')
    def check_not_empty(self):
        if not any(getattr(self, code) is not None for code in ALGORITHM_ORDER):
            raise ValueError('нужен хотя бы один алгоритм')
        return self

    def enabled(self) -> list[tuple[str, OptimizerConfig]]:
        """Алгоритмы в фиксированном порядке BOA, GA, DE"""
        return [(code, getattr(self, code)) for code in ALGORITHM_ORDER if getattr(self, code) is not None]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    plant_file: Path = REFERENCE_PLANT_FILE
    bounds: BoundsSchema = Field(default_factory=BoundsSchema)
    algorithms: AlgorithmsSchema
    seeds: list[Annotated[int, Field(ge=0)]] = Field(default_factory=default_seeds, min_length=1)
    output_dir: Path | None = None

    @field_validator('seeds')
    @classmethod
    def check_unique_seeds(cls, seeds):
        if len(set(seeds)) != len(seeds):
            raise ValueError('seed не должны повторяться')
        return seeds

    def search_space(self) -> SearchSpace:
        try:
            return lead_lag_search_space(self.bounds.model_dump())
        except InvalidSearchSpace as e:
            raise ConfigError(str(e)) from e

    def resolved_output_dir(self) -> Path:
        return Path(self.output_dir or getattr(settings, 'TUNE_OUTPUT_DIR', 'results'))


def load_experiment_config(path, seed: int | None = None, output_dir=None) -> ExperimentConfig:
    """
    Прочитать JSON-файл эксперимента. Относительные пути считаются от каталога файла;
    seed и output_dir из командной строки заменяют значения файла.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except OSError as e:
        raise ConfigError(f"Не удалось прочитать файл эксперимента {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Файл эксперимента {path} не является JSON: {e}") from e
    if not isinstance(payload, dict):
        raise ConfigError(f"Файл эксперимента {path} должен содержать JSON-объект")

    base = path.resolve().parent
    for key in ('plant_file', 'output_dir'):
        if payload.get(key) is not None:
            payload[key] = str(base / payload[key])
    if seed is not None:
        payload['seeds'] = [seed]
    if output_dir is not None:
        payload['output_dir'] = str(Path(output_dir).resolve())

    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as e:
        raise ConfigError(f"Файл эксперимента {path} не прошёл проверку: {e}") from e


class AlgorithmSummary(BaseModel):
    algorithm: str
    seeds: list[int]
    final_objectives: list[float]
    best_objective: float
    median_objective: float
    worst_objective: float
    best_seed: int
    best_params: dict[str, float]
    # пересчитаны из best_params, а не взяты из записи запуска
    best_spectrum: list[tuple[float, float]]
    best_min_damping: float
    median_trace: list[float]
    generations_to_within: list[int]
    median_generations_to_within: float
    evaluation_count: int
    global_steps: int
    local_steps: int


class ComparisonReport(BaseModel):
    plant_file: str
    open_loop_spectrum: list[tuple[float, float]]
    bounds: dict[str, Interval]
    seeds: list[int]
    convergence_tolerance: float
    algorithms: list[AlgorithmSummary]

    def summary(self, algorithm: str) -> AlgorithmSummary:
        for item in self.algorithms:
            if item.algorithm == algorithm:
                return item
        raise KeyError(algorithm)


class CheckResult(BaseModel):
    design: str
    quantity: str
    expected: str
    actual: str
    error: float
    tolerance: float
    passed: bool


class VerificationSummary(BaseModel):
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]
