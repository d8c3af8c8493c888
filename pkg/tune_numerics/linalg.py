"""
Плотная вещественная линейная алгебра для малых матриц состояния:
след, определитель и полный спектр несимметричной матрицы.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgWarning, hessenberg, lu_factor, matrix_balance

from .exceptions import (
    ConvergenceFailure,
    MatrixTooLarge,
    NonFiniteMatrix,
    NonSquareMatrix,
    NumericsError,
)

Matrix = npt.NDArray[np.float64]

MAX_DIMENSION = 64
DEFLATION_TOLERANCE = 1e-12
SWEEPS_PER_EIGENVALUE = 40

_EPS = np.finfo(float).eps


def as_matrix(values) -> Matrix:
    """Копия входа как двумерный float64 массив; NaN/Inf запрещены"""
    matrix = np.array(values, dtype=float)
    if matrix.ndim != 2:
        raise NumericsError(f"Ожидалась двумерная матрица, получено измерений: {matrix.ndim}")
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteMatrix("Матрица содержит NaN или Inf")
    return matrix


def as_square_matrix(values) -> Matrix:
    matrix = as_matrix(values)
    rows, cols = matrix.shape
    if rows != cols:
        raise NonSquareMatrix(matrix.shape)
    return matrix


@dataclass(frozen=True)
class Spectrum:
    """
    Собственные числа вещественной матрицы с учётом кратности,
    упорядоченные по (вещественная часть, мнимая часть).
    """
    eigenvalues: tuple[complex, ...]

    @classmethod
    def from_values(cls, values: Iterable[complex]) -> 'Spectrum':
        ordered = sorted((complex(value) for value in values), key=lambda v: (v.real, v.imag))
        return cls(tuple(ordered))

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def __iter__(self) -> Iterator[complex]:
        return iter(self.eigenvalues)

    def __getitem__(self, index: int) -> complex:
        return self.eigenvalues[index]

    def as_array(self) -> npt.NDArray[np.complex128]:
        return np.array(self.eigenvalues, dtype=complex)

    def to_pairs(self) -> list[list[float]]:
        """[[re, im], ...] для JSON-отчётов"""
        return [[value.real, value.imag] for value in self.eigenvalues]


def format_complex(value: complex, digits: int = 4) -> str:
    sign = '-' if value.imag < 0 else '+'
    return f"{value.real:.{digits}f} {sign} {abs(value.imag):.{digits}f}i"


def trace(m) -> float:
    return float(np.trace(as_square_matrix(m)))


def determinant(m) -> float:
    """Определитель через LU-разложение с частичным выбором ведущего элемента"""
    matrix = as_square_matrix(m)
    if matrix.shape[0] == 0:
        return 1.0
    with warnings.catch_warnings():
        # вырожденная матрица даёт нулевой диагональный элемент, это нормальный результат
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, pivots = lu_factor(matrix, check_finite=False)
    swaps = int(np.count_nonzero(pivots != np.arange(len(pivots))))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * float(np.prod(np.diag(lu)))


def eigenvalues(m) -> Spectrum:
    """
    Все собственные числа вещественной квадратной матрицы.

    Балансировка, приведение к форме Хессенберга отражениями Хаусхолдера,
    затем неявный QR-алгоритм Фрэнсиса с двойным сдвигом.
    """
    matrix = as_square_matrix(m)
    size = matrix.shape[0]
    if size > MAX_DIMENSION:
        raise MatrixTooLarge(size, MAX_DIMENSION)
    if size == 0:
        return Spectrum(())
    if size == 1:
        return Spectrum.from_values([matrix[0, 0]])

    balanced, _ = matrix_balance(matrix, permute=False, scale=True)
    upper = hessenberg(balanced)
    return Spectrum.from_values(_francis_qr(upper))


def _francis_qr(h: Matrix) -> list[complex]:
    """
    Собственные числа верхней матрицы Хессенберга. Работает на копии
    в виде вложенных списков: для 6x6 это заметно быстрее индексации numpy.
    """
    a = h.tolist()
    n = len(a)
    roots = [0j] * n
    norm = sum(abs(a[i][j]) for i in range(n) for j in range(max(i - 1, 0), n))
    budget = SWEEPS_PER_EIGENVALUE * n
    sweeps = 0
    shift = 0.0
    nn = n - 1

    while nn >= 0:
        its = 0
        while True:
            # ищем пренебрежимо малый поддиагональный элемент
            l = nn
            while l >= 1:
                scale = abs(a[l - 1][l - 1]) + abs(a[l][l])
                if scale == 0.0:
                    scale = norm
                if abs(a[l][l - 1]) <= DEFLATION_TOLERANCE * scale:
                    a[l][l - 1] = 0.0
                    break
                l -= 1

            x = a[nn][nn]
            if l == nn:
                roots[nn] = complex(x + shift, 0.0)
                nn -= 1
                break

            y = a[nn - 1][nn - 1]
            w = a[nn][nn - 1] * a[nn - 1][nn]
            if l == nn - 1:
                # отделился блок 2x2
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += shift
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    roots[nn - 1] = complex(x + z, 0.0)
                    roots[nn] = complex(x - w / z if z else x + z, 0.0)
                else:
                    roots[nn - 1] = complex(x + p, -z)
                    roots[nn] = complex(x + p, z)
                nn -= 2
                break

            if sweeps >= budget:
                raise ConvergenceFailure(sweeps, nn + 1)

            if its in (10, 20):
                # исключительный сдвиг
                shift += x
                for i in range(nn + 1):
                    a[i][i] -= x
                s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            sweeps += 1

            # ищем два подряд малых поддиагональных элемента
            m = nn - 2
            while True:
                z = a[m][m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
                q = a[m + 1][m + 1] - z - r - s
                r = a[m + 2][m + 1]
                s = abs(p) + abs(q) + abs(r)
                if s != 0.0:
                    p /= s
                    q /= s
                    r /= s
                if m == l:
                    break
                u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1

            for i in range(m + 2, nn + 1):
                a[i][i - 2] = 0.0
                if i != m + 2:
                    a[i][i - 3] = 0.0

            # двойной шаг QR на строках l..nn и столбцах m..nn
            for k in range(m, nn):
                if k != m:
                    p = a[k][k - 1]
                    q = a[k + 1][k - 1]
                    r = a[k + 2][k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k][k - 1] = -a[k][k - 1]
                else:
                    a[k][k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p = a[k][j] + q * a[k + 1][j]
                    if k != nn - 1:
                        p += r * a[k + 2][j]
                        a[k + 2][j] -= p * z
                    a[k + 1][j] -= p * y
                    a[k][j] -= p * x
                for i in range(l, min(nn, k + 3) + 1):
                    p = x * a[i][k] + y * a[i][k + 1]
                    if k != nn - 1:
                        p += z * a[i][k + 2]
                        a[i][k + 2] -= p * r
                    a[i][k + 1] -= p * q
                    a[i][k] -= p

    # переполнение в блоке 2x2 даёт NaN/Inf вместо корня
    broken = sum(not (math.isfinite(root.real) and math.isfinite(root.imag)) for root in roots)
    if broken:
        raise ConvergenceFailure(sweeps, broken)
    return roots
