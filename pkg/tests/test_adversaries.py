"""
Tests for hard instances and adaptive adversaries.
"""

from fractions import Fraction

import pytest

from limitgen.adversaries import (
    ElementCase,
    WindowSafe,
    alternating_factorial_blocks,
    antichain_reduction_holds,
    as_rule,
    build_instance,
    checkpoint_rows,
    classify_element_rule,
    element_memoryless_adversary,
    expected_meets,
    generation_counterexample,
    identification_counterexample,
    index_pair_adversary,
    index_pair_instance,
    lower_density_instance,
    mixed_instance,
    partition_lower_density_bound,
    sperner_hard_instance,
    window_hard_instance,
    window_staged_adversary,
    zero_density_partition,
)
from limitgen.builtins import evens, multiples, primes
from limitgen.exceptions import CaseUndeterminedError
from limitgen.generators import MemorylessElementGenerator, WindowGenerator
from limitgen.languages import Language
from limitgen.sets import Verdict, intersection, set_equal, universe


class TestSpernerInstance:
    """Antichain construction for memoryless generators."""

    def setup_method(self):
        self.inst = sperner_hard_instance(5)

    def test_shape(self):
        cert = self.inst.certificate
        assert self.inst.collection.size == 5
        assert cert.n == 4
        assert cert.width == 6
        assert len(cert.masks) == 6
        assert self.inst.name == "sperner-k5"

    def test_valid(self):
        assert self.inst.validate() == []

    def test_meets_are_single_cells(self):
        rows = expected_meets(self.inst)
        assert len(rows) == 6
        assert rows[0] == ((1, 2), frozenset([0]))
        assert antichain_reduction_holds(self.inst)

    def test_two_languages(self):
        inst = sperner_hard_instance(2)
        lang = inst.collection.language(2)
        assert not lang.contains(0)
        assert lang.contains(1)

    def test_too_small(self):
        with pytest.raises(ValueError):
            sperner_hard_instance(1)


class TestWindowInstance:
    """Antichain construction with a zero-density cell Z."""

    def setup_method(self):
        self.inst = window_hard_instance(4)

    def test_cells(self):
        assert set(self.inst.cells()) == {"Z", "A_1", "A_2", "A_3"}

    def test_meets_include_zero_cell(self):
        rows = expected_meets(self.inst)
        assert rows[-1] == ((1, 2, 3), frozenset([0]))
        assert antichain_reduction_holds(self.inst)

    def test_fixed_enumeration_stages(self):
        # stage 1 of N = 3: a_1, z, a_2, z, a_3, z
        xs = self.inst.fixed_enumeration.take(6)
        system = self.inst.certificate.system
        assert [system.label(x) for x in xs] == [1, 0, 2, 0, 3, 0]

    def test_valid(self):
        assert self.inst.validate() == []


class TestOtherInstances:
    def test_lower_density(self):
        inst = lower_density_instance(4)
        assert inst.collection.size == 4
        assert inst.validate() == []
        with pytest.raises(ValueError):
            lower_density_instance(2)

    def test_index_pair(self):
        inst = index_pair_instance()
        shared = intersection(inst.collection.language(1).expr, inst.collection.language(2).expr)
        assert set_equal(shared, multiples(4)) is Verdict.TRUE

    def test_identification_counterexample(self):
        inst = identification_counterexample()
        coll = inst.collection
        assert coll.language(1).contains(1) and not coll.language(1).contains(2)
        assert coll.language(3).contains(1) and coll.language(3).contains(2)
        assert set(inst.texts.prefixes) == {"e", "1", "2", "12"}

    def test_generation_counterexample(self):
        inst = generation_counterexample()
        l1 = inst.collection.language(1)
        assert l1.contains(1) and l1.contains(2) and not l1.contains(4)
        assert not l1.contains(0)
        assert l1.contains(3)

    def test_generation_counterexample_checks_letters(self):
        with pytest.raises(ValueError):
            generation_counterexample(1, 1, 2)
        with pytest.raises(ValueError):
            generation_counterexample(a=3)

    def test_factorial_blocks(self):
        blocks = alternating_factorial_blocks()
        assert blocks.contains(3)
        assert not blocks.contains(7)
        assert blocks.contains(25)

    def test_not_an_antichain(self):
        with pytest.raises(ValueError):
            expected_meets(mixed_instance())


class TestZeroDensityPartition:
    def test_bins_cover_base(self):
        bins = zero_density_partition(evens(), 3)
        assert sum(b.count_below(100) for b in bins) == 50
        assert bins[0].contains(0)
        assert not any(b.contains(1) for b in bins)

    def test_invalid(self):
        with pytest.raises(ValueError):
            zero_density_partition(universe(), 1)
        with pytest.raises(TypeError):
            zero_density_partition(primes(), 3)


class TestBuildInstance:
    def test_sized(self):
        assert build_instance("sperner", k=3).name == "sperner-k3"
        with pytest.raises(ValueError):
            build_instance("window")

    def test_target_override(self):
        inst = build_instance("mixed", target=2)
        assert inst.target.name == "evens"
        assert build_instance("length_threshold", target=4).target.take(1) == [4]

    def test_unknown(self):
        with pytest.raises(ValueError):
            build_instance("spiral")


class TestElementAdversary:
    """Adversaries against memoryless element rules."""

    def setup_method(self):
        self.k = Language(evens(), "evens")

    def test_bad_set(self):
        stream = element_memoryless_adversary(lambda x: x, self.k)
        assert stream.case == ElementCase.BAD_SET.value
        assert stream.take(6) == [0, 0, 2, 2, 4, 4]
        assert stream.planted_rounds(6) == [1, 3, 5]

    def test_infinite_fiber(self):
        stream = element_memoryless_adversary(lambda x: 0, self.k)
        assert stream.case == ElementCase.INFINITE_FIBER.value
        assert stream.take(5) == [0, 2, 0, 4, 2]
        assert stream.planted_rounds(5) == [2, 4]

    def test_infinite_image(self):
        stream = element_memoryless_adversary(lambda x: x + 2, self.k)
        assert stream.case == ElementCase.INFINITE_IMAGE.value
        assert stream.take(6) == [2, 0, 0, 4, 2, 2]
        assert stream.planted_rounds(6) == [2, 5]

    def test_undetermined(self):
        with pytest.raises(CaseUndeterminedError):
            classify_element_rule(lambda x: x + 2, self.k, probe=10, threshold=64)

    def test_generator_as_rule(self):
        rule = as_rule(MemorylessElementGenerator(lambda x: x + 1))
        assert rule(3) == 4


class TestIndexPairAdversary:
    def test_targets_other_language(self):
        stream = index_pair_adversary(lambda x: 1)
        assert stream.case == "colour_1"
        assert stream.target.name == "L_2"
        assert stream.take(4) == [0, 0, 4, 2]
        assert stream.planted_rounds(6) == [1, 3, 5]


class _LooseWindow:
    """Window generator stand-in that always answers the whole domain."""

    def output_for_window(self, entries):
        return universe()


class TestWindowAdversary:
    """Staged enumeration against window generators."""

    def test_window_safe(self):
        inst = window_hard_instance(3)
        gen = WindowGenerator(inst.collection, 2)
        stream = window_staged_adversary(gen, inst.target, 2, budget=6)
        assert stream.certify() == WindowSafe(1, (1, 2, 3, 4), 6)

    def test_plants_failing_windows(self):
        stream = window_staged_adversary(_LooseWindow(), Language(evens(), "evens"), 2, budget=1)
        assert stream.take(6) == [0, 2, 4, 6, 8, 10]
        assert stream.planted_rounds(6) == [3, 6]
        assert stream.certify(2) is None

    def test_invalid_width(self):
        with pytest.raises(ValueError):
            window_staged_adversary(_LooseWindow(), Language(evens(), "evens"), 0)


class TestCheckpoints:
    """Checkpoint ratios of the zero-density bins."""

    def setup_method(self):
        self.bins = zero_density_partition(universe(), 3)

    def test_rows(self):
        rows = checkpoint_rows(self.bins[0], 4)
        assert [(r.t, r.count, r.end, r.applies) for r in rows] == [
            (1, 1, 1, False),
            (2, 1, 9, True),
            (3, 1, 99, True),
            (4, 1601, 1699, False),
        ]
        assert rows[1].bound == Fraction(1, 5)
        assert all(r.holds for r in rows)

    def test_not_a_bin(self):
        with pytest.raises(TypeError):
            checkpoint_rows(evens())

    def test_partition_bound(self):
        bound = partition_lower_density_bound(self.bins[1], self.bins, checkpoints=3)
        assert bound.bin_index == 2
        assert bound.holds
        assert bound.ratio_at(2) == Fraction(8, 9)
        assert partition_lower_density_bound(universe(), self.bins) is None
