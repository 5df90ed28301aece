# ABOUTME: Global pytest configuration and shared fixtures for all tests
# ABOUTME: Provides compact pipeline configs, seeded generators and a tiny generated dataset

import sys
from pathlib import Path

import numpy as np
import pytest

# Add root directory to path to allow imports from rendnet
# root/rendnet/tests/conftest.py -> root
root_dir = str(Path(__file__).resolve().parents[2])
if root_dir not in sys.path:
    sys.path.insert(0, root_dir)

from rendnet.models.config import SynthSpec
from rendnet.tests.factories import small_pipeline


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def pipeline():
    return small_pipeline()


@pytest.fixture(scope="session")
def tiny_spec():
    """Two classes, four training and two test documents."""
    return SynthSpec(classes=["square_round_hole", "l_shape"], train=4, test=2, seed=11)


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory, tiny_spec):
    """A generated dataset shared by the service tests."""
    from rendnet.services.synth_service import generate_dataset

    out = tmp_path_factory.mktemp("tiny_dataset")
    generate_dataset(tiny_spec, out)
    return out


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "unit: mark test as a unit test"
    )
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )
