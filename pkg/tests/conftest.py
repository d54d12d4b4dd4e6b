import sys
from functools import lru_cache
from pathlib import Path

import pytest

from reflab.group import GroupSpec, build_group, load_generator_file

G4_FILE = Path(__file__).resolve().parents[1] / "docs" / "g4.json"


@lru_cache(maxsize=None)
def group(label: str):
    if label == "G4":
        return build_group(load_generator_file(G4_FILE))
    return build_group(GroupSpec.parse(label))


@pytest.fixture
def G():
    return group


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for text in mod.summary_lines():
        terminalreporter.write_line(text)
