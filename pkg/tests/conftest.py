from pathlib import Path

import pytest

from polyqc.core import EnergyScales

ROOT = Path(__file__).resolve().parents[1]
SAMPLE_CONFIG = ROOT / "configs" / "table1.cfg"



@pytest.fixture(scope="session")
def meander_scales():
    return EnergyScales.from_elements(118.1e-15, inductance=18.2e-9)


@pytest.fixture(scope="session")
def transmon_scales():
    return EnergyScales.from_elements(123.8e-15, critical_current=31.3e-9)


@pytest.fixture(scope="session")
def heuristic_scales():
    return EnergyScales.from_elements(118.1e-15, inductance=7.0e-9)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, desc, ok in sorted(RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {desc}")
