"""
Pytest configuration for ThabitSolver tests
"""
import os
import pytest
import tempfile
import shutil

from thabit_solver.config import SolverConfig


@pytest.fixture
def temp_dir():
    """Create a temporary directory that's removed after the test"""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture
def default_config():
    """Default configuration without progress bars"""
    config = SolverConfig()
    config.show_progress = False
    return config


@pytest.fixture
def sample_config_file(temp_dir):
    """Create a sample YAML config file"""
    file_path = os.path.join(temp_dir, "thabit.yaml")
    with open(file_path, "w") as f:
        f.write("""precision: 256
b_min: 3
b_max: 7
n_max: 120
search_cutoffs:
  padovan: 310
  unknown: 5
check_paper: true
show_progress: false
""")
    return file_path
