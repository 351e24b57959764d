import sys
from pathlib import Path

import pytest

# tests import the shared brute-force oracles as a plain module
sys.path.insert(0, str(Path(__file__).parent))

from rescueaid.service.demo import train_demo_bundle  # noqa: E402


@pytest.fixture(scope="session")
def desk_bundle():
    """One desk-scale trained bundle for every service-level test."""
    return train_demo_bundle()
