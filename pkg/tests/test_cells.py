"""
Tests for cell systems and their refinements.
"""

from fractions import Fraction

import pytest

from limitgen.builtins import evens, multiples, odds
from limitgen.cells import (
    BlockPartitionSystem,
    FactorialBlockSystem,
    PowerRoundRobinSystem,
    ProductSystem,
    ResidueSystem,
    TrivialSystem,
    refine,
    zero_density_block_ends,
)
from limitgen.exceptions import IncompatibleCellSystemsError
from limitgen.sets import StructuredSet, finiteness, intersection, universe


class TestPeriodicSystems:
    """Trivial and residue labelings."""

    def test_trivial(self):
        system = TrivialSystem()
        assert system.cell_count == 1
        assert system.label(12345) == 0
        assert system.count_below(0, 10) == 10
        assert system.nth_in(frozenset([0]), 5) == 4

    def test_residue_counting(self):
        system = ResidueSystem(3)
        assert [system.label(x) for x in range(6)] == [0, 1, 2, 0, 1, 2]
        assert system.count_below(0, 10) == 4  # 0, 3, 6, 9
        assert system.count_below(2, 10) == 3  # 2, 5, 8
        assert system.count_cells_below({0, 2}, 10) == 7

    def test_residue_nth(self):
        system = ResidueSystem(4)
        cells = frozenset([1, 3])
        assert [system.nth_in(cells, n) for n in range(1, 6)] == [1, 3, 5, 7, 9]

    def test_residue_huge_index(self):
        system = ResidueSystem(7)
        n = 10 ** 30
        assert system.nth_in(frozenset([3]), n) == (n - 1) * 7 + 3

    def test_residue_density(self):
        assert ResidueSystem(5).density(2) == (Fraction(1, 5), Fraction(1, 5))

    def test_invalid_modulus(self):
        with pytest.raises(ValueError):
            ResidueSystem(0)

    def test_equality_by_key(self):
        assert ResidueSystem(6) == ResidueSystem(6)
        assert ResidueSystem(6) != ResidueSystem(3)
        assert hash(ResidueSystem(6)) == hash(ResidueSystem(6))


class TestRefinement:
    """Common refinements."""

    def test_identical(self):
        ref = refine(ResidueSystem(4), ResidueSystem(4))
        assert ref.system == ResidueSystem(4)
        assert ref.lift_left({1}) == frozenset([1])

    def test_trivial_is_refined_by_anything(self):
        ref = refine(TrivialSystem(), ResidueSystem(3))
        assert ref.system == ResidueSystem(3)
        assert ref.lift_left({0}) == frozenset([0, 1, 2])

    def test_residues_refine_to_lcm(self):
        ref = refine(ResidueSystem(4), ResidueSystem(6))
        assert ref.system == ResidueSystem(12)
        assert ref.lift_left({1}) == frozenset([1, 5, 9])
        assert ref.lift_right({0}) == frozenset([0, 6])

    def test_over_budget(self):
        with pytest.raises(IncompatibleCellSystemsError):
            refine(ResidueSystem(97), ResidueSystem(101), budget=100)

    def test_unrelated_systems(self):
        with pytest.raises(IncompatibleCellSystemsError):
            refine(PowerRoundRobinSystem(2), BlockPartitionSystem(2))

    def test_based_positional_systems_do_not_refine(self):
        with pytest.raises(IncompatibleCellSystemsError):
            refine(PowerRoundRobinSystem(2, evens()), ResidueSystem(3))

    def test_positional_and_residue_refine_to_product(self):
        ref = refine(PowerRoundRobinSystem(2), ResidueSystem(2))
        assert ref.system == ProductSystem(2, PowerRoundRobinSystem(2))
        assert ref.system.cell_count == 6
        assert ref.lift_left({PowerRoundRobinSystem.Z}) == frozenset([0, 3])
        assert ref.lift_right({1}) == frozenset([3, 4, 5])

    def test_factorial_and_residue_refine_to_product(self):
        ref = refine(ResidueSystem(3), FactorialBlockSystem())
        assert ref.system == ProductSystem(3, FactorialBlockSystem())
        assert ref.lift_right({FactorialBlockSystem.INSIDE}) == frozenset([1, 3, 5])

    def test_products_refine_with_residues(self):
        product = ProductSystem(2, PowerRoundRobinSystem(2))
        ref = refine(product, ResidueSystem(3))
        assert ref.system == ProductSystem(6, PowerRoundRobinSystem(2))
        # residue 1 mod 2 with inner cell 2 lifts to residues 1, 3, 5 mod 6
        assert ref.lift_left({product.cell(1, 2)}) == frozenset([5, 11, 17])

    def test_product_over_budget(self):
        with pytest.raises(IncompatibleCellSystemsError):
            refine(PowerRoundRobinSystem(2), ResidueSystem(2000))


class TestProductSystem:
    """Residue classes crossed with an aperiodic system."""

    @pytest.mark.parametrize("other, n", [
        (PowerRoundRobinSystem(2), 500),
        (PowerRoundRobinSystem(3), 500),
        (BlockPartitionSystem(2), 1200),
        (FactorialBlockSystem(), 800),
    ])
    def test_counts_match_labels(self, other, n):
        system = ProductSystem(3, other)
        for cell in range(system.cell_count):
            expected = sum(1 for x in range(n) if system.label(x) == cell)
            assert system.count_below(cell, n) == expected

    def test_labels(self):
        system = ProductSystem(2, PowerRoundRobinSystem(2))
        for x in range(100):
            assert system.split(system.label(x)) == (x % 2, PowerRoundRobinSystem(2).label(x))

    def test_finite_cells(self):
        system = ProductSystem(2, PowerRoundRobinSystem(2))
        # Z = {0, 1, 3, 7, ...}: 0 is its only even member
        assert system.cell_elements(system.cell(0, PowerRoundRobinSystem.Z)) == (0,)
        assert system.is_infinite(system.cell(1, PowerRoundRobinSystem.Z))
        assert system.is_infinite(system.cell(0, 1))

    def test_nth_in(self):
        system = ProductSystem(3, FactorialBlockSystem())
        cells = frozenset([system.cell(0, FactorialBlockSystem.INSIDE)])
        assert [system.nth_in(cells, n) for n in range(1, 4)] == [3, 6, 27]

    def test_needs_residue_counting(self):
        with pytest.raises(IncompatibleCellSystemsError):
            ProductSystem(2, PowerRoundRobinSystem(2, evens()))

    def test_densities(self):
        system = ProductSystem(3, PowerRoundRobinSystem(2))
        assert system.density(system.cell(1, 1)) == (Fraction(1, 6), Fraction(1, 6))
        assert system.density(system.cell(1, PowerRoundRobinSystem.Z)) == (Fraction(0), Fraction(0))
        assert ProductSystem(2, PowerRoundRobinSystem(2)).density(1) is None

    def test_intersections_stay_exact(self):
        for base in (None, universe()):
            z = StructuredSet(PowerRoundRobinSystem(2, base), frozenset([PowerRoundRobinSystem.Z]))
            even_z = intersection(z, evens())
            assert isinstance(even_z, StructuredSet)
            verdict = finiteness(even_z)
            assert verdict.is_finite
            assert verdict.elements == (0,)
            assert finiteness(intersection(z, odds())).is_infinite

    def test_factorial_blocks_by_residue(self):
        inside = StructuredSet(FactorialBlockSystem(), frozenset([FactorialBlockSystem.INSIDE]))
        s = intersection(inside, multiples(3))
        assert isinstance(s, StructuredSet)
        assert [x for x in range(130) if s.contains(x)] == [3, 6] + list(range(27, 121, 3))
        assert s.count_below(130) == 2 + len(range(27, 121, 3))


class TestPowerRoundRobin:
    """Powers-of-two cell plus round-robin cells."""

    def setup_method(self):
        self.system = PowerRoundRobinSystem(3)

    def test_labels_of_first_positions(self):
        # positions 1, 2, 4, 8 are powers; the rest cycle through A_1 .. A_3
        labels = [self.system.label(x) for x in range(10)]
        assert labels == [0, 0, 1, 0, 2, 3, 1, 0, 2, 3]

    def test_cell_count(self):
        assert self.system.cell_count == 4
        assert PowerRoundRobinSystem(3, evens()).cell_count == 5

    def test_counts_match_labels(self):
        n = 500
        for cell in range(self.system.cell_count):
            expected = sum(1 for x in range(n) if self.system.label(x) == cell)
            assert self.system.count_below(cell, n) == expected

    def test_zero_cell_nth(self):
        z = frozenset([PowerRoundRobinSystem.Z])
        assert [self.system.nth_in(z, n) for n in range(1, 6)] == [0, 1, 3, 7, 15]

    def test_densities(self):
        assert self.system.density(0) == (Fraction(0), Fraction(0))
        assert self.system.density(2) == (Fraction(1, 3), Fraction(1, 3))

    def test_based_on_evens(self):
        system = PowerRoundRobinSystem(2, evens())
        assert system.label(1) == system.outside_cell
        assert system.label(0) == PowerRoundRobinSystem.Z
        assert system.label(4) == 1  # position 3 is the first non-power
        assert system.density(1) is None


class TestBlockPartition:
    """Zero-lower-density blocks."""

    def test_block_ends(self):
        ends = zero_density_block_ends()
        assert [next(ends) for _ in range(4)] == [1, 9, 99, 1699]

    def test_labels_follow_blocks(self):
        system = BlockPartitionSystem(2)
        # position 1 is block 1 (bin 1); positions 2..9 are block 2 (bin 2)
        assert system.label(0) == 0
        assert all(system.label(x) == 1 for x in range(1, 9))
        assert system.label(9) == 0

    def test_counts_match_labels(self):
        system = BlockPartitionSystem(3)
        n = 2000
        for cell in range(3):
            expected = sum(1 for x in range(n) if system.label(x) == cell)
            assert system.count_below(cell, n) == expected

    def test_declared_density(self):
        assert BlockPartitionSystem(3).density(0) == (Fraction(1), Fraction(0))


class TestFactorialBlocks:
    """Alternating factorial blocks."""

    def setup_method(self):
        self.system = FactorialBlockSystem()

    def test_labels(self):
        # inside: 3..6 (2! < x <= 3!), 25..120 (4! < x <= 5!)
        inside = [x for x in range(130) if self.system.label(x) == FactorialBlockSystem.INSIDE]
        assert inside == list(range(3, 7)) + list(range(25, 121))

    def test_count_below(self):
        assert self.system.count_below(FactorialBlockSystem.INSIDE, 121) == 4 + 96
        assert self.system.count_below(FactorialBlockSystem.OUTSIDE, 121) == 121 - 100
