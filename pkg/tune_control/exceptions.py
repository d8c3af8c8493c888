class ControlError(Exception):
    """Базовая ошибка модели управления"""


class PlantValidationError(ControlError):
    """Описание объекта управления не прошло проверку"""


class InvalidParams(ControlError):
    """Параметры регулятора дают некорректную замкнутую систему"""


class ZeroEigenvalue(ControlError):
    def __init__(self, eigenvalue=0j):
        self.eigenvalue = eigenvalue
        super().__init__("Коэффициент демпфирования не определён для нулевого собственного числа")


class EmptySpectrum(ControlError):
    """Пустой спектр: минимум не определён"""
