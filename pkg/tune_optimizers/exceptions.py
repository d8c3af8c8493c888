class OptimizerError(Exception):
    """Базовая ошибка оптимизаторов"""


class InvalidSearchSpace(OptimizerError):
    """Границы области поиска заданы неверно"""


class NegativeIntensity(OptimizerError):
    """Интенсивность стимула не может быть отрицательной"""


class PopulationTooSmall(OptimizerError):
    def __init__(self, population_size, minimum):
        self.population_size = population_size
        self.minimum = minimum
        super().__init__(f"Популяция {population_size} меньше минимальной ({minimum})")


class ObjectiveEvaluationError(OptimizerError):
    """Ошибка целевой функции; position - точка, на которой она произошла"""

    def __init__(self, position, message):
        self.position = tuple(float(value) for value in position)
        super().__init__(f"{message} (точка {self.position})")
