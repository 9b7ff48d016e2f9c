"""Test job specifications, settings and the memory guard."""

import pytest

from graphcx.config import EDGE_HARD_CAP, VERTEX_HARD_CAP, get_settings
from graphcx.core.errors import BudgetExceededError, FamilyError
from graphcx.core.graph import FamilyTag
from graphcx.core.types import FamilyKind
from graphcx.pipeline.jobs import FAMILY_NAMES, JobSpec, run_parallel
from graphcx.utils.resources import check_memory_budget

pytestmark = pytest.mark.unit


def _spec(**overrides) -> JobSpec:
    values = {"command": "gen", "family": "oriented", "n": 1, "vmax": 2, "emax": 2}
    values.update(overrides)
    return JobSpec(**values)


class TestJobSpec:
    """Validation and the slice grid."""

    def test_families(self):
        assert FAMILY_NAMES == ("directed", "oriented", "sourced", "hairy", "ribbon")

    def test_unknown_family(self):
        with pytest.raises(FamilyError):
            _spec(family="planar")

    def test_nonpositive_bounds(self):
        with pytest.raises(FamilyError):
            _spec(vmax=0)
        with pytest.raises(FamilyError):
            _spec(jobs=0)

    def test_hard_caps(self):
        with pytest.raises(BudgetExceededError):
            _spec(vmax=VERTEX_HARD_CAP + 1)
        with pytest.raises(BudgetExceededError):
            _spec(emax=EDGE_HARD_CAP + 1)
        with pytest.raises(BudgetExceededError):
            _spec(family="ribbon", emax=7)

    def test_ribbon_has_no_tag(self):
        with pytest.raises(FamilyError):
            _ = _spec(family="ribbon").kind

    def test_hairy_tags(self):
        tags = _spec(family="hairy", n=2, smax=3).tags()
        assert tags == [FamilyTag(FamilyKind.HAIRY, 2, s) for s in (1, 2, 3)]

    def test_slice_grid(self):
        grid = _spec().slice_grid()
        tag = FamilyTag(FamilyKind.ORIENTED, 1)
        assert grid == [(tag, 1, 0), (tag, 1, 1), (tag, 1, 2), (tag, 2, 1), (tag, 2, 2)]


class TestRunParallel:
    def test_serial(self):
        assert list(run_parallel(abs, [-1, -2, 3])) == [1, 2, 3]

    def test_process_pool_keeps_order(self):
        assert list(run_parallel(abs, [-4, 5, -6, 7], jobs=2)) == [4, 5, 6, 7]


class TestSettings:
    """Environment-driven configuration."""

    def test_env_values(self, mock_env_vars):
        settings = get_settings()
        assert settings.seed == 7
        assert settings.exact is False

    def test_caps_are_enforced(self, mock_env_vars, monkeypatch):
        monkeypatch.setenv("GRAPHCX_VMAX", "50")
        monkeypatch.setenv("GRAPHCX_JOBS", "0")
        get_settings.cache_clear()
        settings = get_settings()
        assert settings.vmax == VERTEX_HARD_CAP
        assert settings.jobs == 1

    def test_bad_integer_falls_back(self, mock_env_vars, monkeypatch):
        monkeypatch.setenv("GRAPHCX_EMAX", "lots")
        get_settings.cache_clear()
        assert get_settings().emax == EDGE_HARD_CAP


class TestMemoryBudget:
    def test_under_budget(self, mocker):
        mocker.patch("graphcx.utils.resources.rss_mb", return_value=10.0)
        check_memory_budget("test", limit_mb=100)

    def test_over_budget(self, mocker):
        mocker.patch("graphcx.utils.resources.rss_mb", return_value=500.0)
        with pytest.raises(BudgetExceededError, match="memory budget"):
            check_memory_budget("test", limit_mb=100)
