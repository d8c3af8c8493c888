from django.apps import AppConfig


class TuneNumericsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tune_numerics'
    verbose_name = 'Линейная алгебра'
