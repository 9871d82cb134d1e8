import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synsseq.cli import load_fixture  # noqa: E402


@pytest.fixture(scope="session")
def fixture():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
