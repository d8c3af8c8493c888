"""
Django management команда tune: эксперимент, проверка опубликованных таблиц
и разовый расчёт спектра.
"""
import logging

from django.core.management.base import BaseCommand, CommandError

from tune_control.closed_loop import LeadLagParams, assemble_closed_loop
from tune_control.damping import min_damping_ratio, unstable_modes
from tune_control.exceptions import ControlError, PlantValidationError
from tune_control.plant import get_reference_plant, load_plant
from tune_harness.exceptions import ConfigError, ExperimentRunError
from tune_harness.reports import render_report, render_verification
from tune_harness.schemas import load_experiment_config
from tune_harness.services import ExperimentService
from tune_numerics.exceptions import NumericsError
from tune_numerics.linalg import eigenvalues, format_complex
from tune_optimizers.exceptions import OptimizerError

logger = logging.getLogger(__name__)

RUN = 'run'
VERIFY_TABLES = 'verify-tables'
EIG = 'eig'

EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_FAILURE = 2
EXIT_VERIFICATION_MISMATCH = 3


class Command(BaseCommand):
    help = 'Настройка lead-lag регулятора алгоритмами BOA, GA и DE'

    def add_arguments(self, parser):
        parser.add_argument('action', nargs='?', default=RUN, choices=[RUN, VERIFY_TABLES, EIG])
        parser.add_argument('--config', help='JSON-файл эксперимента (для run)')
        parser.add_argument('--plant', help='JSON-файл объекта; по умолчанию эталонный объект')
        parser.add_argument('--kc', type=float)
        parser.add_argument('--t1', type=float)
        parser.add_argument('--t2', type=float)
        parser.add_argument('--seed', type=int, help='заменить список seed одним значением')
        parser.add_argument('--out', help='заменить каталог результатов')

    def handle(self, *args, **options):
        action = options['action']
        try:
            if action == VERIFY_TABLES:
                self.verify_tables(options)
            elif action == EIG:
                self.eig(options)
            else:
                self.run_experiment(options)
        except (ConfigError, PlantValidationError) as e:
            raise CommandError(f'Ошибка конфигурации: {e}', returncode=EXIT_CONFIG_ERROR) from e
        except (ExperimentRunError, NumericsError, ControlError, OptimizerError) as e:
            logger.error(f"tune {action}: {e}")
            raise CommandError(f'Ошибка вычислений: {e}', returncode=EXIT_NUMERICAL_FAILURE) from e

    def load_plant(self, options):
        return load_plant(options['plant']) if options.get('plant') else get_reference_plant()

    def run_experiment(self, options):
        if not options.get('config'):
            raise ConfigError('Для запуска эксперимента нужен --config')
        config = load_experiment_config(options['config'], seed=options.get('seed'), output_dir=options.get('out'))
        self.stdout.write(f'Запуск эксперимента, результаты в {config.resolved_output_dir()}')
        report = ExperimentService.run_experiment(config)
        self.stdout.write(render_report(report))
        self.stdout.write(self.style.SUCCESS('Эксперимент завершён'))

    def verify_tables(self, options):
        summary = ExperimentService.verify_reference_tables(self.load_plant(options))
        for line in render_verification(summary):
            self.stdout.write(line)
        if not summary.passed:
            raise CommandError(
                f'Не совпало проверок: {len(summary.failures)} из {len(summary.checks)}',
                returncode=EXIT_VERIFICATION_MISMATCH,
            )
        self.stdout.write(self.style.SUCCESS(f'Все {len(summary.checks)} проверок пройдены'))

    def eig(self, options):
        plant = self.load_plant(options)
        given = [options.get(name) for name in ('kc', 't1', 't2')]
        if any(value is not None for value in given) and not all(value is not None for value in given):
            raise ConfigError('Параметры --kc, --t1 и --t2 задаются только вместе')

        if given[0] is None:
            spectrum = eigenvalues(plant.a)
            self.stdout.write('Разомкнутая система')
        else:
            params = LeadLagParams(*given)
            spectrum = eigenvalues(assemble_closed_loop(plant, params))
            self.stdout.write(f'Замкнутая система: K={params.kc:g}, T1={params.t1:g}, T2={params.t2:g}')

        for value in spectrum:
            self.stdout.write(f'  {format_complex(value)}')
        self.stdout.write(f'ζ_min = {min_damping_ratio(spectrum):.6f}')
        modes = unstable_modes(spectrum)
        if modes:
            self.stdout.write(self.style.WARNING(
                f"Неустойчивые моды: {', '.join(format_complex(value) for value in modes)}"
            ))
        else:
            self.stdout.write(self.style.SUCCESS('Все моды устойчивы'))
