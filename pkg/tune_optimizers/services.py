"""
Единая точка запуска оптимизаторов по коду алгоритма
"""
import logging

from .boa import run_boa
from .choices import BOA, DE, GA
from .configs import BoaConfig, DeConfig, GaConfig, OptimizerConfig
from .de import run_de
from .exceptions import OptimizerError
from .ga import run_ga
from .records import RunRecord
from .space import SearchSpace

logger = logging.getLogger(__name__)

ALGORITHM_RUNNERS = {
    BOA: run_boa,
    GA: run_ga,
    DE: run_de,
}

CONFIG_CLASSES = {
    BOA: BoaConfig,
    GA: GaConfig,
    DE: DeConfig,
}


class OptimizationService:
    """Сервис запуска алгоритмов"""

    @staticmethod
    def default_config(algorithm: str, **overrides) -> OptimizerConfig:
        """Настройка алгоритма по умолчанию с переопределёнными полями"""
        if algorithm not in CONFIG_CLASSES:
            raise OptimizerError(f"Неизвестный алгоритм: {algorithm}")
        return CONFIG_CLASSES[algorithm](**overrides)

    @staticmethod
    def run(algorithm: str, objective, space: SearchSpace, config: OptimizerConfig | None = None) -> RunRecord:
        """Запустить алгоритм; config должен соответствовать алгоритму"""
        if algorithm not in ALGORITHM_RUNNERS:
            raise OptimizerError(f"Неизвестный алгоритм: {algorithm}")
        config = config or CONFIG_CLASSES[algorithm]()
        if not isinstance(config, CONFIG_CLASSES[algorithm]):
            raise OptimizerError(
                f"Для {algorithm} нужна настройка {CONFIG_CLASSES[algorithm].__name__}, "
                f"получена {type(config).__name__}"
            )
        try:
            return ALGORITHM_RUNNERS[algorithm](objective, space, config)
        except OptimizerError as e:
            logger.error(f"Ошибка запуска {algorithm} (seed {config.seed}): {e}")
            raise
