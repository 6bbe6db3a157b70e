import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE: dict = {}


@pytest.fixture(scope="session", autouse=True)
def _session_cache(tmp_path_factory):
    """Every test run starts from an empty on-disk cache of its own."""
    from theta16 import thetaengine as te
    d = tmp_path_factory.mktemp("repcache")
    os.environ["THETA_CACHE_DIR"] = str(d)
    te.reset_default_cache(d)
    yield d
    te.default_cache().flush()


@pytest.fixture
def record():
    def _record(n, ok, detail=""):
        ACCEPTANCE[n] = (bool(ok), detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
