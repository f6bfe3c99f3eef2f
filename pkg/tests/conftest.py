import re
from collections import defaultdict
from pathlib import Path

import pytest

from ramanujan5 import orders

CACHE = Path(__file__).parent / ".cache" / "order.json"

CRITERIA = {
    1: "B_max lattice reproduction",
    2: "Q_max properties",
    3: "worked gate chain",
    4: "enumeration census",
    5: "gate-count formulas",
    6: "split-label census",
    7: "order verification suite",
    8: "instance-constant audits",
    9: "mod-n machinery",
    10: "complex-builder oracle equivalence",
    11: "vertex star within the valency table",
}

_outcomes = defaultdict(list)


@pytest.fixture(scope="session")
def bundle():
    """The order data, cached across runs (rebuilt when the cache is absent)."""
    if CACHE.exists():
        return orders.OrderBundle.from_json(CACHE.read_text())
    b = orders.OrderBundle.build()
    CACHE.parent.mkdir(exist_ok=True)
    CACHE.write_text(b.to_json())
    return b


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_c(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ok = report.outcome == "passed" and not hasattr(report, "wasxfail")
        _outcomes[int(m.group(1))].append((m.group(2), ok))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(CRITERIA):
        parts = _outcomes.get(k)
        if not parts:
            continue
        failed = [name for name, ok in parts if not ok]
        status = "FAIL" if failed else "PASS"
        extra = f" (red: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {k:2d} {CRITERIA[k]}: {status}{extra}")
