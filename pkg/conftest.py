import pytest
from hypothesis import settings

settings.register_profile("default", derandomize=True, deadline=None, max_examples=200)
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte-Carlo runs that take more than a few seconds")


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Keep the developer's environment out of Settings.from_env()"""
    for name in ("LOG_LEVEL", "ROBUST_TEST_OUTPUT_DIR", "ROBUST_TEST_WORKERS", "ROBUST_TEST_MAX_N"):
        monkeypatch.delenv(name, raising=False)
