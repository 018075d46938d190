from __future__ import annotations

import json
from pathlib import Path

import pytest

from gvlat.lattice import from_json

DATA = Path(__file__).resolve().parent.parent / "data"

A2_GRAM = [["2", "-1"], ["-1", "2"]]


def make(gram, basis, ff, dim=None, section_style="minimal"):
    dim = dim or len(gram)
    return from_json({"dim": dim, "gram": gram, "lattice_basis": basis, "ff": ff}, section_style)


def load(name: str, section_style: str = "minimal"):
    return from_json(json.loads((DATA / f"{name}.json").read_text()), section_style)


@pytest.fixture(scope="session")
def a1():
    return load("a1")


@pytest.fixture(scope="session")
def a1_ff():
    return load("a1_ff")


@pytest.fixture(scope="session")
def a2():
    return load("a2")


@pytest.fixture(scope="session")
def a2_ff():
    return load("a2_ff")


@pytest.fixture(scope="session")
def order8():
    return load("order8")


@pytest.fixture(scope="session")
def halfrank():
    return load("halfrank")


@pytest.fixture(scope="session")
def empty1():
    return make([["1"]], [], ["1/2"])


@pytest.fixture(scope="session")
def data_dir():
    return DATA


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
