import sys
from pathlib import Path

import pytest

from funcsec import fixtures as F
from funcsec.characterize import decide

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
sys.path.insert(0, str(Path(__file__).resolve().parent))

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def hidden_3x3():
    return F.hidden_3x3()


@pytest.fixture
def hidden3_tree(hidden_3x3):
    return decide(hidden_3x3).protocol


@pytest.fixture
def data_dir():
    return DATA
