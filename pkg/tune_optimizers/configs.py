"""
Параметры алгоритмов. Значения по умолчанию - опорная настройка сравнения:
популяция 50, 200 поколений.
"""
from pydantic import BaseModel, ConfigDict, Field


class OptimizerConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    population_size: int = Field(50, ge=1)
    generations: int = Field(200, ge=0)
    seed: int = Field(0, ge=0)
    # остановка после stall_generations поколений без улучшения; None - не останавливаться
    stall_generations: int | None = Field(None, ge=1)


class BoaConfig(OptimizerConfig):
    sensory_modality_c: float = Field(0.01, gt=0, le=1)
    power_exponent_a: float = Field(0.1, gt=0, le=1)
    switch_probability_p: float = Field(0.8, ge=0, le=1)


class GaConfig(OptimizerConfig):
    population_size: int = Field(50, ge=2)
    mutation_probability: float = Field(0.05, ge=0, le=1)
    crossover_probability: float = Field(0.9, ge=0, le=1)
    crossover_coefficient: float = Field(0.5, ge=0, le=1)


class DeConfig(OptimizerConfig):
    crossover_rate: float = Field(0.9, ge=0, le=1)
    differential_weight: float = Field(0.5, ge=0, le=2)
