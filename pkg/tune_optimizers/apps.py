from django.apps import AppConfig


class TuneOptimizersConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tune_optimizers'
    verbose_name = 'Оптимизаторы'
