from __future__ import annotations

from pathlib import Path

import pytest

from spectraux.graph import ConflictGraph
from spectraux.model import BidVector, Scenario
from spectraux.scenario import load_scenario

DATA = Path(__file__).parent / "data"

# Golden 3-operator instance. Station ids: A1..A3 = 0..2, B1..B3 = 3..5, C1..C3 = 6..8.
A1, A2, A3, B1, B2, B3, C1, C2, C3 = range(9)
FIXTURE_EDGES = [(A1, B1), (A2, B2), (A3, B1), (A1, C1), (A2, C2), (B3, C3)]
FIXTURE_BIDS = [(10, 8, 7), (9, 8, 5), (10, 8, 3)]
A, B, C = 0, 1, 2


@pytest.fixture
def fixture_graph() -> ConflictGraph:
    return ConflictGraph.from_edges([0, 0, 0, 1, 1, 1, 2, 2, 2], FIXTURE_EDGES)


@pytest.fixture
def fixture_bids() -> list[BidVector]:
    return [BidVector(i, b) for i, b in enumerate(FIXTURE_BIDS)]


@pytest.fixture
def fixture_scenario() -> Scenario:
    return load_scenario(DATA / "fixture.scn.json")


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    lines = request.config._acceptance_lines

    def record(number: int, name: str, ok: bool, detail: str = "") -> bool:
        lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
