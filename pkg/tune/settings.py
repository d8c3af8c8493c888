import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent
SECRET_KEY = os.getenv('SECRET_KEY', 'tune-local-secret-key')
DEBUG = os.getenv('DEBUG', '0') == '1'
ALLOWED_HOSTS = []
INSTALLED_APPS = [
    'tune_numerics',  # линейная алгебра и собственные числа
    'tune_control',  # объект управления, регулятор и коэффициент демпфирования
    'tune_optimizers',  # BOA, GA, DE
    'tune_harness',  # эксперименты и команда tune
]
# Базы данных нет: результаты пишутся только в файлы
DATABASES = {}
LANGUAGE_CODE = 'ru'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
TEST_RUNNER = 'tune.test_runner.TuneTestRunner'

TUNE_LOG_LEVEL = os.getenv('TUNE_LOG_LEVEL', 'INFO').upper()
TUNE_OUTPUT_DIR = Path(os.getenv('TUNE_OUTPUT_DIR', BASE_DIR / 'results'))
TUNE_WORKERS = int(os.getenv('TUNE_WORKERS', '1'))
TUNE_DEFAULT_SEEDS = [
    int(seed) for seed in os.getenv('TUNE_DEFAULT_SEEDS', ','.join(str(i) for i in range(20))).split(',')
    if seed.strip()
]
TUNE_CONVERGENCE_TOLERANCE = float(os.getenv('TUNE_CONVERGENCE_TOLERANCE', '0.01'))
TUNE_RUN_SLOW_TESTS = os.getenv('TUNE_RUN_SLOW_TESTS', '0') == '1'

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'default': {
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'default',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': TUNE_LOG_LEVEL, 'propagate': False}
        for app in ('tune_numerics', 'tune_control', 'tune_optimizers', 'tune_harness')
    },
}
