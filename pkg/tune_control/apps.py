from django.apps import AppConfig


class TuneControlConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tune_control'
    verbose_name = 'Регулятор и демпфирование'
