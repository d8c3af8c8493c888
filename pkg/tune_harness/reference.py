"""
Опубликованные оптимальные настройки регулятора для эталонного объекта:
параметры, спектр замкнутой системы и ζ_min для каждого алгоритма.
"""
from dataclasses import dataclass

from tune_control.closed_loop import LeadLagParams
from tune_optimizers.choices import BOA, DE, GA

EIGENVALUE_TOLERANCE = 1e-2
OBJECTIVE_TOLERANCE = 1e-3
OPEN_LOOP_TOLERANCE = 1e-3
OPEN_LOOP_DESIGN = 'plant'


def conjugate_pair(real: float, imag: float) -> tuple[complex, complex]:
    return complex(real, imag), complex(real, -imag)


@dataclass(frozen=True)
class ReferenceDesign:
    algorithm: str
    params: LeadLagParams
    eigenvalues: tuple[complex, ...]
    min_damping: float


REFERENCE_DESIGNS = (
    ReferenceDesign(
        algorithm=GA,
        params=LeadLagParams(18.3998, 0.2619, 0.1),
        eigenvalues=(-18.2, *conjugate_pair(-3.032, 5.5839), *conjugate_pair(-2.9595, 5.4499), -0.34543),
        min_damping=0.4772,
    ),
    ReferenceDesign(
        algorithm=DE,
        params=LeadLagParams(18.402, 0.2618, 0.1),
        eigenvalues=(-18.199, *conjugate_pair(-3.0183, 5.5576), *conjugate_pair(-2.9737, 5.4754), -0.34544),
        min_damping=0.4772,
    ),
    ReferenceDesign(
        algorithm=BOA,
        params=LeadLagParams(18.1352, 0.2714, 0.1),
        eigenvalues=(-18.296, *conjugate_pair(-3.2845, 6.1484), *conjugate_pair(-2.6591, 4.9738), -0.34519),
        min_damping=0.4712,
    ),
)

OPEN_LOOP_EIGENVALUES = (*conjugate_pair(-10.3932, 3.2910), *conjugate_pair(0.2954, 4.9577))
