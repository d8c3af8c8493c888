"""
Линеаризованный объект управления x' = A x + B u с фильтром washout на входе регулятора.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from tune_numerics.exceptions import NumericsError
from tune_numerics.linalg import Matrix, as_matrix, as_square_matrix

from .exceptions import PlantValidationError

logger = logging.getLogger(__name__)

REFERENCE_PLANT_FILE = Path(__file__).resolve().parent / 'data' / 'reference_plant.json'

_reference_plant = None


@dataclass(frozen=True, eq=False)
class StateSpacePlant:
    """
    a: матрица состояния n x n, b: столбец входа n x 1.
    input_row и sensed_state хранятся с нуля.
    """
    a: Matrix
    b: Matrix
    washout_time_constant: float
    input_row: int
    sensed_state: int

    def __post_init__(self):
        try:
            a = as_square_matrix(self.a)
            b = as_matrix(np.reshape(self.b, (-1, 1)))
        except NumericsError as e:
            raise PlantValidationError(f"Некорректные матрицы объекта: {e}") from e

        size = a.shape[0]
        if size == 0:
            raise PlantValidationError("Матрица состояния пуста")
        if b.shape != (size, 1):
            raise PlantValidationError(f"Вектор входа должен иметь {size} строк, получено {b.shape[0]}")
        if not self.washout_time_constant > 0:
            raise PlantValidationError("Постоянная времени washout должна быть положительной")
        for name in ('input_row', 'sensed_state'):
            index = getattr(self, name)
            if not 0 <= index < size:
                raise PlantValidationError(f"{name}={index} вне диапазона состояний 0..{size - 1}")
        if b[self.input_row, 0] == 0.0 or np.count_nonzero(b[:, 0]) != 1:
            raise PlantValidationError("Вход должен действовать только на строку input_row")

        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'washout_time_constant', float(self.washout_time_constant))

    @property
    def size(self) -> int:
        return self.a.shape[0]


class PlantDocument(BaseModel):
    """JSON-описание объекта; индексы в файле считаются с единицы"""
    model_config = ConfigDict(extra='forbid', frozen=True, allow_inf_nan=False)

    a: list[list[float]]
    b: list[float]
    washout_time_constant: float = Field(gt=0)
    sensed_state: int = Field(ge=1)
    input_row: int = Field(ge=1)

    @model_validator(mode='after')
    def check_dimensions(self):
        size = len(self.a)
        if size == 0 or any(len(row) != size for row in self.a):
            raise ValueError('матрица a должна быть квадратной и непустой')
        if len(self.b) != size:
            raise ValueError(f'вектор b должен содержать {size} элементов')
        if self.sensed_state > size or self.input_row > size:
            raise ValueError(f'индексы состояний должны лежать в 1..{size}')
        return self

    def to_plant(self) -> StateSpacePlant:
        return StateSpacePlant(
            a=np.array(self.a, dtype=float),
            b=np.array(self.b, dtype=float).reshape(-1, 1),
            washout_time_constant=self.washout_time_constant,
            input_row=self.input_row - 1,
            sensed_state=self.sensed_state - 1,
        )


def parse_plant(payload: dict) -> StateSpacePlant:
    try:
        document = PlantDocument.model_validate(payload)
    except ValidationError as e:
        raise PlantValidationError(f"Описание объекта не прошло проверку: {e}") from e
    return document.to_plant()


def load_plant(path) -> StateSpacePlant:
    """Загрузить и проверить объект из JSON-файла"""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except OSError as e:
        raise PlantValidationError(f"Не удалось прочитать файл объекта {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise PlantValidationError(f"Файл объекта {path} не является JSON: {e}") from e

    plant = parse_plant(payload)
    logger.info(f"Загружен объект {path.name}: {plant.size} состояний")
    return plant


def get_reference_plant() -> StateSpacePlant:
    """Эталонный объект из data/reference_plant.json, с кэшированием"""
    global _reference_plant
    if _reference_plant is None:
        _reference_plant = load_plant(REFERENCE_PLANT_FILE)
    return _reference_plant
