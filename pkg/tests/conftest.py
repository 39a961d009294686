import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trojanrisk.config import load_config  # noqa: E402
from trojanrisk.fixtures import DATA_DIR, curve_path, system_path  # noqa: E402
from trojanrisk.spectral import read_csv  # noqa: E402


@pytest.fixture(scope="session")
def curve():
    return lambda name: read_csv(curve_path(name))


@pytest.fixture(scope="session")
def system():
    return lambda name: load_config(system_path(name)).system


@pytest.fixture(scope="session")
def config():
    return lambda name: load_config(system_path(name))


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR
