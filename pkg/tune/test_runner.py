from django.conf import settings
from django.test.runner import DiscoverRunner


class TuneTestRunner(DiscoverRunner):
    """
    Обычный DiscoverRunner, но статистические приёмочные тесты (тег slow)
    по умолчанию пропускаются: они гоняют десятки тысяч разложений.
    """

    def __init__(self, *args, tags=None, exclude_tags=None, **kwargs):
        exclude_tags = set(exclude_tags or ())
        requested = set(tags or ())
        if 'slow' not in requested and not getattr(settings, 'TUNE_RUN_SLOW_TESTS', False):
            exclude_tags.add('slow')
        super().__init__(*args, tags=tags, exclude_tags=exclude_tags, **kwargs)
