"""
Tests for the acceptance suites.
"""

import pytest

from limitgen.config import ProbePolicy
from limitgen.suites import SUITES, SuiteOptions, _minimax_row, demo_collections, run_suite


class TestRegistry:
    def test_names(self):
        assert set(SUITES) == {"minimax", "window", "buffer", "identify", "bruteforce", "scd", "memoryless", "coding"}

    def test_unknown(self):
        with pytest.raises(ValueError):
            run_suite("everything")

    def test_demo_collections(self):
        assert [c.size for c in demo_collections()] == [2, 3, 4, 5, 6]


class TestFastSuites:
    def test_scd(self):
        result = run_suite("scd")
        assert result.passed
        assert len(result.rows) == 18

    def test_coding(self):
        result = run_suite("coding", SuiteOptions(rounds=6))
        assert result.passed, result.failures


@pytest.mark.slow
class TestSlowSuites:
    """Full grids; minutes rather than seconds."""

    @pytest.mark.parametrize("name", ["minimax", "window", "buffer", "identify", "bruteforce", "memoryless"])
    def test_suite_passes(self, name):
        result = run_suite(name, SuiteOptions(workers=2))
        assert result.passed, result.failures


class TestMinimaxRows:
    """Single rows of the minimax suite."""

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_outputs_are_single_cells(self, k):
        row = _minimax_row(k, 300, ProbePolicy())
        assert row["t_star"] is not None
        assert row["single_cell_outputs"]
        assert row["antichain_reduction"]
