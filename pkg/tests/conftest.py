import numpy as np
import pytest

from kddfs import dataset as dc
from kddfs.cli import fixture_path
from kddfs.synthetic import kdd_like_lines
from helpers import official_path


@pytest.fixture(scope="session")
def fixture_dataset():
    return dc.load_kdd(fixture_path())


@pytest.fixture(scope="session")
def desk_dataset():
    """10,000-row stratified sample: official file when present, else the synthetic stand-in."""
    path = official_path()
    if path is not None:
        return dc.stratified_subsample(dc.load_kdd(path), 10_000, seed=42)
    return dc.label_records(dc.parse_lines(kdd_like_lines(10_000, seed=42)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict(request):
    """Record one acceptance line; shown in the terminal summary."""
    def record(status, detail):
        line = f"[{status}] {request.node.name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
