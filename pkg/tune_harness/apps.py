from django.apps import AppConfig


class TuneHarnessConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tune_harness'
    verbose_name = 'Эксперименты'
