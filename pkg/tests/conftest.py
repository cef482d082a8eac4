import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from portdemand.ingest import FilterConfig, filter_calls, read_port_calls  # noqa: E402
from portdemand.synthgen import bundled_dataset  # noqa: E402

DATA = Path(__file__).parent / "data"

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def bundled_path():
    return Path(str(bundled_dataset()))


@pytest.fixture(scope="session")
def bundled_calls(bundled_path):
    calls, errors = read_port_calls(bundled_path)
    assert errors == []
    return calls


@pytest.fixture(scope="session")
def bundled_filtered(bundled_calls):
    return filter_calls(bundled_calls, FilterConfig())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
