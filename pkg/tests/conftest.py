import numpy as np
import pytest

from photon_sim.config import load_document
from photon_sim.loop import run_loop
from photon_sim.signals import ElectricalWaveform, SamplingGrid


@pytest.fixture(scope="session")
def grid():
    return SamplingGrid()


@pytest.fixture(scope="session")
def small_grid():
    return SamplingGrid(sample_rate=1024.0, n_samples=1024)


@pytest.fixture(scope="session")
def ref_doc():
    return load_document("@paper")


@pytest.fixture(scope="session")
def ref_report(ref_doc):
    return run_loop(ref_doc.chain)


def tone(grid, k, amplitude=1.0, phase=0.0):
    n = grid.n_samples
    idx = np.arange(n)
    return ElectricalWaveform(grid, amplitude * np.cos(2 * np.pi * ((k * idx) % n) / n + phase))


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def record(number: int, title: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} | {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
