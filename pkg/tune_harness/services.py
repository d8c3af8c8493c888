"""
Сервис экспериментов: серия запусков BOA/GA/DE по seed, кривые сходимости,
сводный отчёт и проверка опубликованных таблиц.
"""
import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from django.conf import settings

from tune_control.closed_loop import LeadLagParams
from tune_control.damping import DampingObjective, closed_loop_spectrum, min_damping_ratio
from tune_control.exceptions import ControlError, PlantValidationError
from tune_control.plant import StateSpacePlant, load_plant
from tune_numerics.exceptions import NumericsError
from tune_numerics.linalg import eigenvalues, format_complex
from tune_optimizers.configs import OptimizerConfig
from tune_optimizers.exceptions import OptimizerError
from tune_optimizers.records import RunRecord, generations_to_within
from tune_optimizers.services import OptimizationService
from tune_optimizers.space import SearchSpace

from .exceptions import ConfigError, ExperimentRunError
from .reference import (
    EIGENVALUE_TOLERANCE,
    OBJECTIVE_TOLERANCE,
    OPEN_LOOP_DESIGN,
    OPEN_LOOP_EIGENVALUES,
    OPEN_LOOP_TOLERANCE,
    REFERENCE_DESIGNS,
)
from .reports import render_report
from .schemas import AlgorithmSummary, CheckResult, ComparisonReport, ExperimentConfig, VerificationSummary

logger = logging.getLogger(__name__)

CONVERGENCE_DIR = 'convergence'
REPORT_JSON = 'report.json'
REPORT_TEXT = 'report.txt'


def run_single(algorithm: str, config: OptimizerConfig, plant: StateSpacePlant, space: SearchSpace) -> RunRecord:
    """Один запуск (выполняется и в пуле процессов)"""
    return OptimizationService.run(algorithm, DampingObjective(plant), space, config)


def convergence_csv_path(output_dir: Path, record: RunRecord) -> Path:
    return output_dir / CONVERGENCE_DIR / f"{record.algorithm}_seed{record.seed}.csv"


def write_convergence_csv(path: Path, record: RunRecord) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['generation', 'best_objective'])
        for generation, value in enumerate(record.best_objective_per_generation):
            writer.writerow([generation, repr(value)])


def median_trace(traces: list[tuple[float, ...]]) -> list[float]:
    """Поточечная медиана; короткие (остановленные раньше) кривые дополняются последним значением"""
    length = max(len(trace) for trace in traces)
    padded = np.array([list(trace) + [trace[-1]] * (length - len(trace)) for trace in traces])
    return [float(value) for value in np.median(padded, axis=0)]


def match_eigenvalues(expected, computed) -> list[tuple[complex, complex]]:
    """Каждому ожидаемому числу - ближайшее ещё не занятое вычисленное"""
    remaining = list(computed)
    pairs = []
    for value in expected:
        value = complex(value)
        nearest = min(remaining, key=lambda candidate: abs(candidate - value))
        remaining.remove(nearest)
        pairs.append((value, nearest))
    return pairs


def spectrum_checks(design: str, expected, spectrum, tolerance: float) -> list[CheckResult]:
    """Поэлементное сравнение спектра с опубликованным; ошибка - максимум по Re и Im"""
    if len(spectrum) != len(expected):
        return [CheckResult(
            design=design, quantity='spectrum', expected=str(len(expected)),
            actual=str(len(spectrum)), error=float('inf'), tolerance=tolerance, passed=False,
        )]
    checks = []
    for value, actual in match_eigenvalues(expected, spectrum):
        error = max(abs(value.real - actual.real), abs(value.imag - actual.imag))
        checks.append(CheckResult(
            design=design, quantity='eigenvalue',
            expected=format_complex(value), actual=format_complex(actual),
            error=error, tolerance=tolerance, passed=error <= tolerance,
        ))
    return checks


class ExperimentService:
    """Сервис для запуска экспериментов и проверки эталонных таблиц"""

    @staticmethod
    def load_experiment_plant(config: ExperimentConfig) -> StateSpacePlant:
        try:
            return load_plant(config.plant_file)
        except PlantValidationError as e:
            raise ConfigError(str(e)) from e

    @staticmethod
    def execute_runs(tasks, plant: StateSpacePlant, space: SearchSpace) -> list[RunRecord]:
        """
        tasks - список (алгоритм, настройка с seed). Результаты возвращаются в порядке tasks,
        поэтому отчёт не зависит от числа процессов.
        """
        workers = int(getattr(settings, 'TUNE_WORKERS', 1))
        if workers > 1 and len(tasks) > 1:
            logger.info(f"Запуск {len(tasks)} прогонов в {workers} процессах")
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = [executor.submit(run_single, algorithm, config, plant, space) for algorithm, config in tasks]
                outcomes = []
                for (algorithm, config), future in zip(tasks, futures):
                    try:
                        outcomes.append(future.result())
                    except (NumericsError, ControlError, OptimizerError) as e:
                        logger.error(f"Запуск {algorithm} с seed {config.seed} завершился ошибкой: {e}")
                        raise ExperimentRunError(algorithm, config.seed, str(e)) from e
                return outcomes

        records = []
        for algorithm, config in tasks:
            try:
                records.append(run_single(algorithm, config, plant, space))
            except (NumericsError, ControlError, OptimizerError) as e:
                logger.error(f"Запуск {algorithm} с seed {config.seed} завершился ошибкой: {e}")
                raise ExperimentRunError(algorithm, config.seed, str(e)) from e
        return records

    @staticmethod
    def summarize(algorithm: str, records: list[RunRecord], plant: StateSpacePlant, tolerance: float) -> AlgorithmSummary:
        finals = [record.final_best_objective for record in records]
        # при равенстве лучшим считается запуск с более ранним seed
        best = max(records, key=lambda record: record.final_best_objective)
        params = LeadLagParams.from_vector(best.final_best_position)
        spectrum = closed_loop_spectrum(plant, params)
        reached = [generations_to_within(record.best_objective_per_generation, tolerance) for record in records]
        return AlgorithmSummary(
            algorithm=algorithm,
            seeds=[record.seed for record in records],
            final_objectives=finals,
            best_objective=best.final_best_objective,
            median_objective=float(np.median(finals)),
            worst_objective=min(finals),
            best_seed=best.seed,
            best_params=params.as_dict(),
            best_spectrum=[tuple(pair) for pair in spectrum.to_pairs()],
            best_min_damping=min_damping_ratio(spectrum),
            median_trace=median_trace([record.best_objective_per_generation for record in records]),
            generations_to_within=reached,
            median_generations_to_within=float(np.median(reached)),
            evaluation_count=sum(record.evaluation_count for record in records),
            global_steps=sum(record.global_steps for record in records),
            local_steps=sum(record.local_steps for record in records),
        )

    @staticmethod
    def run_experiment(config: ExperimentConfig) -> ComparisonReport:
        """
        Все алгоритмы по всем seed. Пишет convergence/*.csv, report.json и report.txt
        в output_dir и возвращает отчёт. Отчёт зависит только от config.
        """
        plant = ExperimentService.load_experiment_plant(config)
        space = config.search_space()
        output_dir = config.resolved_output_dir()
        try:
            (output_dir / CONVERGENCE_DIR).mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"Каталог результатов {output_dir} недоступен для записи: {e}") from e

        algorithms = config.algorithms.enabled()
        tasks = [
            (algorithm, algorithm_config.model_copy(update={'seed': seed}))
            for algorithm, algorithm_config in algorithms
            for seed in config.seeds
        ]
        logger.info(
            f"Эксперимент: {', '.join(code for code, _ in algorithms)}, "
            f"{len(config.seeds)} seed, всего {len(tasks)} запусков"
        )
        records = ExperimentService.execute_runs(tasks, plant, space)

        for record in records:
            write_convergence_csv(convergence_csv_path(output_dir, record), record)

        tolerance = float(getattr(settings, 'TUNE_CONVERGENCE_TOLERANCE', 0.01))
        summaries = [
            ExperimentService.summarize(
                algorithm, [record for record in records if record.algorithm == algorithm], plant, tolerance
            )
            for algorithm, _ in algorithms
        ]
        report = ComparisonReport(
            plant_file=str(config.plant_file),
            open_loop_spectrum=[tuple(pair) for pair in eigenvalues(plant.a).to_pairs()],
            bounds=config.bounds.model_dump(),
            seeds=list(config.seeds),
            convergence_tolerance=tolerance,
            algorithms=summaries,
        )

        (output_dir / REPORT_JSON).write_text(report.model_dump_json(indent=2) + '\n', encoding='utf-8')
        (output_dir / REPORT_TEXT).write_text(render_report(report), encoding='utf-8')
        logger.info(f"Отчёт записан в {output_dir}")
        return report

    @staticmethod
    def verify_reference_tables(plant: StateSpacePlant) -> VerificationSummary:
        """
        Пересчитать спектр разомкнутого объекта, а также спектр и ζ_min для трёх
        опубликованных настроек. Несовпадения попадают в сводку, исключения не выбрасываются.
        """
        checks = []
        try:
            open_loop = eigenvalues(plant.a)
            checks.extend(spectrum_checks(OPEN_LOOP_DESIGN, OPEN_LOOP_EIGENVALUES, open_loop, OPEN_LOOP_TOLERANCE))
        except NumericsError as e:
            logger.warning(f"Разомкнутый объект: не удалось вычислить спектр: {e}")
            checks.append(CheckResult(
                design=OPEN_LOOP_DESIGN, quantity='spectrum', expected='', actual=str(e),
                error=float('inf'), tolerance=OPEN_LOOP_TOLERANCE, passed=False,
            ))

        for design in REFERENCE_DESIGNS:
            try:
                spectrum = closed_loop_spectrum(plant, design.params)
                objective_value = min_damping_ratio(spectrum)
            except (NumericsError, ControlError) as e:
                logger.warning(f"{design.algorithm}: не удалось вычислить спектр: {e}")
                checks.append(CheckResult(
                    design=design.algorithm, quantity='spectrum', expected='', actual=str(e),
                    error=float('inf'), tolerance=EIGENVALUE_TOLERANCE, passed=False,
                ))
                continue

            checks.extend(spectrum_checks(design.algorithm, design.eigenvalues, spectrum, EIGENVALUE_TOLERANCE))

            error = abs(objective_value - design.min_damping)
            checks.append(CheckResult(
                design=design.algorithm, quantity='min_damping',
                expected=f"{design.min_damping:.4f}", actual=f"{objective_value:.6f}",
                error=error, tolerance=OBJECTIVE_TOLERANCE, passed=error <= OBJECTIVE_TOLERANCE,
            ))

        summary = VerificationSummary(checks=checks)
        for check in summary.failures:
            logger.warning(f"Несовпадение {check.design} {check.quantity}: {check.expected} != {check.actual}")
        logger.info(f"Проверка таблиц: {len(checks) - len(summary.failures)} из {len(checks)} совпало")
        return summary
