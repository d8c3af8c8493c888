"""
Текстовые таблицы для report.txt и вывода команды tune.
"""
from tune_numerics.linalg import format_complex
from tune_optimizers.choices import ALGORITHM_CHOICES

from .schemas import ComparisonReport, VerificationSummary


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)]
    lines = ['  '.join(str(cell).rjust(width) for cell, width in zip(header, widths))]
    lines.append('  '.join('-' * width for width in widths))
    for row in rows:
        lines.append('  '.join(str(cell).rjust(width) for cell, width in zip(row, widths)))
    return lines


def _pairs_to_strings(pairs) -> list[str]:
    return [format_complex(complex(real, imag)) for real, imag in pairs]


def render_report(report: ComparisonReport) -> str:
    summaries = report.algorithms
    names = [item.algorithm.upper() for item in summaries]
    labels = dict(ALGORITHM_CHOICES)
    lines = [
        f"Объект: {report.plant_file}",
        f"Seeds: {', '.join(str(seed) for seed in report.seeds)}",
        f"Алгоритмы: {'; '.join(f'{name} - {labels[item.algorithm]}' for name, item in zip(names, summaries))}",
        f"Разомкнутая система: {', '.join(_pairs_to_strings(report.open_loop_spectrum))}",
        '',
        'Оптимальные параметры регулятора',
    ]
    lines += _table(
        ['', 'K', 'T1', 'T2', 'seed'],
        [[name, f"{item.best_params['kc']:.4f}", f"{item.best_params['t1']:.4f}",
          f"{item.best_params['t2']:.4f}", str(item.best_seed)]
         for name, item in zip(names, summaries)],
    )

    lines += ['', 'Собственные числа при оптимальных параметрах']
    spectra = [_pairs_to_strings(item.best_spectrum) for item in summaries]
    depth = max(len(spectrum) for spectrum in spectra)
    lines += _table(
        names,
        [[spectrum[i] if i < len(spectrum) else '' for spectrum in spectra] for i in range(depth)],
    )

    lines += ['', 'Минимальный коэффициент демпфирования']
    lines += _table(
        ['', 'лучший', 'медиана', 'худший', 'ζ_min (пересчёт)'],
        [[name, f"{item.best_objective:.4f}", f"{item.median_objective:.4f}",
          f"{item.worst_objective:.4f}", f"{item.best_min_damping:.4f}"]
         for name, item in zip(names, summaries)],
    )

    lines += ['', f"Поколений до {report.convergence_tolerance:.0%} от финального значения"]
    lines += _table(
        ['', 'медиана', 'по seed', 'вычислений'],
        [[name, f"{item.median_generations_to_within:g}",
          ' '.join(str(value) for value in item.generations_to_within), str(item.evaluation_count)]
         for name, item in zip(names, summaries)],
    )
    return '\n'.join(lines) + '\n'


def render_verification(summary: VerificationSummary) -> list[str]:
    lines = []
    for check in summary.checks:
        status = 'OK  ' if check.passed else 'FAIL'
        lines.append(
            f"{status} {check.design.upper():<4} {check.quantity:<12} "
            f"ожидалось {check.expected:<20} получено {check.actual:<20} "
            f"ошибка {check.error:.2e} (допуск {check.tolerance:g})"
        )
    return lines
