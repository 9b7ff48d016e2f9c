"""Shared pytest fixtures for graphcx tests."""

import os
import shutil
import tempfile

import pytest

from graphcx.config import get_settings
from graphcx.core.graph import FamilyTag, LabeledDiGraph
from graphcx.core.types import FamilyKind
from graphcx.ribbon.ribbon import RibbonGraph


@pytest.fixture
def temp_cache_dir():
    """Create a temporary directory for cache files."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture
def mock_env_vars():
    """Pin the graphcx environment and reset the settings cache around the test."""
    original_env = os.environ.copy()

    os.environ["GRAPHCX_SEED"] = "7"
    os.environ["GRAPHCX_EXACT"] = "false"
    get_settings.cache_clear()

    yield

    os.environ.clear()
    os.environ.update(original_env)
    get_settings.cache_clear()


@pytest.fixture
def theta_graph():
    """0 => 1 plus one more edge 0 -> 1: two vertices, three parallel edges."""
    return LabeledDiGraph(2, ((0, 1), (0, 1), (0, 1)))


@pytest.fixture
def double_edge_graph():
    """The oriented graph 0 => 1."""
    return LabeledDiGraph(2, ((0, 1), (0, 1)))


@pytest.fixture
def hairy_triangle():
    """Triangle with one hair on each vertex: every vertex 3-valent."""
    return LabeledDiGraph(3, ((0, 1), (1, 2), (2, 0)), (0, 1, 2))


@pytest.fixture
def hairy_path():
    """Path 0 - 1 - 2 with one hair on vertex 0 (a tree, not admissible)."""
    return LabeledDiGraph(3, ((0, 1), (1, 2)), (0,))


@pytest.fixture
def crossing_graph():
    """Two sources each feeding two targets: trivalent once legs are attached."""
    return LabeledDiGraph(4, ((0, 2), (0, 3), (1, 2), (1, 3)))


@pytest.fixture
def oriented_n1():
    return FamilyTag(FamilyKind.ORIENTED, 1)


@pytest.fixture
def edge_ribbon():
    return RibbonGraph((0, 1))


@pytest.fixture
def loop_ribbon():
    return RibbonGraph((1, 0))


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Set up test environment before each test."""
    import warnings

    warnings.filterwarnings("ignore", category=DeprecationWarning)

    yield
