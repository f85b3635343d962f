"""
Tests for exact and empirical densities.
"""

from fractions import Fraction

import pytest

from limitgen.builtins import evens, factorial_blocks, multiples, primes
from limitgen.cells import PowerRoundRobinSystem
from limitgen.density import (
    count_in_prefix,
    density_ratio_series,
    empirical_density,
    exact_lower_density,
    exact_upper_density,
    factorial_schedule,
    geometric_schedule,
)
from limitgen.sets import StructuredSet, finite_set, universe


class TestSchedules:
    def test_geometric(self):
        assert geometric_schedule(2, 5) == [4, 8, 16, 32]

    def test_factorial(self):
        assert factorial_schedule(2) == [2, 6, 24, 120]


class TestExactDensity:
    """Densities read off declared cell densities."""

    def test_residue_in_universe(self):
        assert exact_upper_density(multiples(3), universe()) == Fraction(1, 3)
        assert exact_lower_density(multiples(3), universe()) == Fraction(1, 3)

    def test_relative_to_language(self):
        # multiples of 4 are half of the evens
        assert exact_upper_density(multiples(4), evens()) == Fraction(1, 2)

    def test_finite_set_has_density_zero(self):
        assert exact_upper_density(finite_set([1, 2, 3]), universe()) == 0

    def test_zero_cell(self):
        system = PowerRoundRobinSystem(4)
        zero = StructuredSet(system, frozenset([PowerRoundRobinSystem.Z]))
        assert exact_upper_density(zero, universe()) == 0
        cell = StructuredSet(system, frozenset([2]))
        assert exact_upper_density(cell, universe()) == Fraction(1, 4)

    def test_factorial_blocks_have_no_natural_density(self):
        assert exact_upper_density(factorial_blocks(), universe()) == 1
        assert exact_lower_density(factorial_blocks(), universe()) == 0

    def test_opaque_is_not_exact(self):
        assert exact_upper_density(primes(horizon=10 ** 4), universe()) is None


class TestEmpiricalDensity:
    """Sampled density ratios."""

    def test_count_in_prefix(self):
        # K_10 = evens below 20; multiples of 4 among them: 0, 4, 8, 12, 16
        assert count_in_prefix(multiples(4), evens(), 10) == 5
        assert count_in_prefix(multiples(4), evens(), 0) == 0

    def test_ratio_series(self):
        series = density_ratio_series(multiples(2), universe(), [10, 11])
        assert series == [(10, Fraction(1, 2)), (11, Fraction(6, 11))]

    def test_periodic_estimate(self):
        est = empirical_density(multiples(5), universe(), geometric_schedule(4, 12))
        assert abs(est.upper_est - Fraction(1, 5)) < Fraction(1, 50)
        assert est.lower_est <= est.upper_est

    def test_oscillation_is_visible(self):
        schedule = factorial_schedule(4)
        est = empirical_density(factorial_blocks(), universe(), schedule, burn_in=0.0)
        assert est.upper_est > Fraction(4, 5)
        assert est.lower_est < Fraction(1, 5)

    def test_burn_in_validated(self):
        with pytest.raises(ValueError):
            empirical_density(evens(), universe(), [8], burn_in=1.0)

    def test_frame(self):
        est = empirical_density(evens(), universe(), [4, 8])
        frame = est.to_frame()
        assert list(frame.columns) == ["horizon", "ratio"]
        assert frame["ratio"].tolist() == [0.5, 0.5]
