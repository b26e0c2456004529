from pathlib import Path

import pytest

from grnhoare import load_network, load_triple, load_valuation

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def fig1():
    return load_network(MODELS / "fig1.net")


@pytest.fixture
def fig1_val(fig1):
    return load_valuation(MODELS / "fig1.val", fig1)


@pytest.fixture
def ffl():
    return load_network(MODELS / "feedforward.net")


@pytest.fixture
def ffl_pinned():
    return load_network(MODELS / "feedforward_pinned.net")


@pytest.fixture
def triple():
    def load(name, net=None):
        return load_triple(MODELS / f"{name}.triple", net)

    return load


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
