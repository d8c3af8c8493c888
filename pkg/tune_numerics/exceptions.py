class NumericsError(Exception):
    """Базовая ошибка линейной алгебры"""


class NonSquareMatrix(NumericsError):
    def __init__(self, shape):
        self.shape = tuple(shape)
        super().__init__(f"Ожидалась квадратная матрица, получена {self.shape}")


class NonFiniteMatrix(NumericsError):
    """Матрица содержит NaN или Inf"""


class MatrixTooLarge(NumericsError):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"Размер матрицы {size} превышает предел {limit}")


class ConvergenceFailure(NumericsError):
    def __init__(self, sweeps, remaining):
        self.sweeps = sweeps
        self.remaining = remaining
        super().__init__(
            f"QR-итерация не сошлась за {sweeps} проходов, "
            f"не найдено собственных чисел: {remaining}"
        )
