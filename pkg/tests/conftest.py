import os

import numpy as np
import pytest

# criterion number -> (outcome, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record(request):
    """Attach a measured-value line to the acceptance summary."""
    def _record(criterion, detail):
        ACCEPTANCE.setdefault(criterion, {})["detail"] = detail
    return _record


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    entry = ACCEPTANCE.setdefault(num, {})
    entry["name"] = name
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["outcome"] = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        if report.skipped and isinstance(report.longrepr, tuple):
            entry.setdefault("detail", report.longrepr[2])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        e = ACCEPTANCE[num]
        line = f"criterion {num}: {e.get('outcome', 'NOT RUN'):<4} {e.get('name', '')}"
        if e.get("detail"):
            line += f"  [{e['detail']}]"
        terminalreporter.write_line(line)


def data_path(name):
    root = os.environ.get("HUFFRE_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))
    path = os.path.join(root, name)
    return path if os.path.exists(path) else None
