import os
import random
import sys

import pytest

# Ensure project root is in path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from backend.infra.config import Config
from backend.lattice.roots import builtin


@pytest.fixture(autouse=True)
def isolated_log(tmp_path, monkeypatch):
    """Keep test runs out of the project log."""
    Config.initialize()
    monkeypatch.setattr(Config, "LOG_PATH", str(tmp_path / "weyl_lab.log"))


@pytest.fixture
def co():
    return builtin("co2222")


@pytest.fixture
def a2():
    return builtin("dynkin:A2")


@pytest.fixture
def affine_a1():
    return builtin("affine:A1")


@pytest.fixture
def rng():
    return random.Random(0)
