import os

import django
import pytest

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tune.settings')
django.setup()


def pytest_collection_modifyitems(config, items):
    # Same policy as tune.test_runner.TuneTestRunner: tests tagged 'slow'
    # are skipped unless TUNE_RUN_SLOW_TESTS is enabled.
    from django.conf import settings

    if getattr(settings, 'TUNE_RUN_SLOW_TESTS', False):
        return
    skip_slow = pytest.mark.skip(reason="tagged 'slow'; set TUNE_RUN_SLOW_TESTS=1 to run")
    for item in items:
        cls = getattr(item, 'cls', None)
        if cls is not None and 'slow' in getattr(cls, 'tags', set()):
            item.add_marker(skip_slow)
