import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ssckit.corpus import load_fixture


@pytest.fixture
def diamond():
    return load_fixture("diamond")


@pytest.fixture
def diamond_pattern():
    return load_fixture("diamond_pattern")


@pytest.fixture
def path3():
    return load_fixture("path3")


@pytest.fixture
def path3_pattern():
    return load_fixture("path3_pattern")


@pytest.fixture
def star4():
    return load_fixture("star4")


@pytest.fixture
def star4_pattern():
    return load_fixture("star4_pattern")


@pytest.fixture
def k3():
    return load_fixture("k3")


@pytest.fixture
def k3_pattern():
    return load_fixture("k3_pattern")
