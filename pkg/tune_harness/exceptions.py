class HarnessError(Exception):
    """Базовая ошибка экспериментов"""


class ConfigError(HarnessError):
    """Файл эксперимента, границы или пути заданы неверно"""


class ExperimentRunError(HarnessError):
    """Ошибка одного запуска; algorithm и seed указывают, какого именно"""

    def __init__(self, algorithm, seed, message):
        self.algorithm = algorithm
        self.seed = seed
        super().__init__(f"{algorithm}, seed {seed}: {message}")
