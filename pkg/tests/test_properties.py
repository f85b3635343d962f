"""
Property tests against brute-force oracles on bounded prefixes: set algebra
across cell systems, almost-inclusion, partition counts, seeded games,
pairing codes and antichains.
"""

import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st

from limitgen.adversaries import lower_density_instance, sperner_hard_instance, zero_density_partition
from limitgen.adversaries.streams import finitely_repeating_enumeration
from limitgen.builtins import evens
from limitgen.cells import (
    BlockPartitionSystem,
    FactorialBlockSystem,
    PowerRoundRobinSystem,
    ProductSystem,
    ResidueSystem,
)
from limitgen.combinatorics import (
    SubsetMask,
    chain_of,
    is_antichain,
    max_antichain_bruteforce,
    middle_layer,
    sperner_width,
    symmetric_chain_decomposition,
)
from limitgen.config import SamplingConfig
from limitgen.generators import BufferGenerator, CanonicalIntersectionGenerator
from limitgen.generators.coding import pair, seq_decode, seq_encode, unpair
from limitgen.harness import run_game
from limitgen.languages import AlmostOrder, almost_compare
from limitgen.ranges import RangeSet
from limitgen.sets import StructuredSet, Verdict, difference, finite_set, intersection, set_equal, union
from tests.settings import QUICK_SETTINGS, SLOW_SETTINGS, STANDARD_SETTINGS

PREFIX = 60
SYSTEM = ResidueSystem(6)

small_sets = st.frozensets(st.integers(min_value=0, max_value=40), max_size=12)
cells = st.frozensets(st.integers(min_value=0, max_value=5))


@st.composite
def structured_sets(draw):
    return StructuredSet.build(SYSTEM, draw(cells), plus=draw(small_sets), minus=draw(small_sets))


def _members(s, bound=PREFIX):
    return {x for x in range(bound) if s.contains(x)}


class TestRangeSetAlgebra:
    """RangeSet operations agree with Python sets."""

    @given(small_sets, small_sets)
    @STANDARD_SETTINGS
    def test_operations(self, a, b):
        ra, rb = RangeSet.of(a), RangeSet.of(b)
        assert set(ra | rb) == a | b
        assert set(ra & rb) == a & b
        assert set(ra - rb) == a - b

    @given(small_sets, st.integers(min_value=0, max_value=45))
    @STANDARD_SETTINGS
    def test_count_below(self, a, n):
        assert RangeSet.of(a).count_below(n) == len([x for x in a if x < n])

    @given(small_sets)
    @STANDARD_SETTINGS
    def test_intervals_disjoint_and_separated(self, a):
        intervals = RangeSet.of(a).intervals
        for (_, stop), (start, _) in zip(intervals, intervals[1:]):
            assert stop < start


class TestStructuredAlgebra:
    """Combinators on one cell system agree with pointwise membership."""

    @given(structured_sets(), structured_sets())
    @SLOW_SETTINGS
    def test_combinators(self, a, b):
        ma, mb = _members(a), _members(b)
        assert _members(union(a, b)) == ma | mb
        assert _members(intersection(a, b)) == ma & mb
        assert _members(difference(a, b)) == ma - mb

    @given(structured_sets())
    @STANDARD_SETTINGS
    def test_count_below_matches_membership(self, s):
        assert s.count_below(PREFIX) == len(_members(s))

    @given(structured_sets(), st.integers(min_value=1, max_value=20))
    @STANDARD_SETTINGS
    def test_nth_element(self, s, n):
        if not s.infinite_cells:
            return
        x = s.nth_element(n)
        assert s.contains(x)
        assert s.count_below(x) == n - 1


class TestCodes:
    @given(st.integers(min_value=0, max_value=10 ** 12))
    @QUICK_SETTINGS
    def test_unpair_inverts_pair(self, z):
        assert pair(*unpair(z)) == z

    @given(st.lists(st.integers(min_value=0, max_value=50), max_size=5))
    @QUICK_SETTINGS
    def test_sequence_codes(self, seq):
        assert seq_decode(seq_encode(seq)) == tuple(seq)

    @given(st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=4))
    @QUICK_SETTINGS
    def test_prefix_codes_grow(self, seq):
        assert seq_encode(seq[:-1]) < seq_encode(seq)


class TestChains:
    @given(st.integers(min_value=1, max_value=8), st.data())
    @STANDARD_SETTINGS
    def test_chain_of_belongs_to_decomposition(self, n, data):
        bits = data.draw(st.integers(min_value=0, max_value=(1 << n) - 1))
        mask = SubsetMask(n, bits)
        chain = chain_of(mask)
        assert mask in chain
        assert chain in symmetric_chain_decomposition(n)


# ==================== Mixed cell systems ====================

HORIZON = 10 ** 4
MIXED_SYSTEMS = [ResidueSystem(4), ResidueSystem(6), PowerRoundRobinSystem(2)]
far_sets = st.frozensets(st.integers(min_value=0, max_value=HORIZON - 1), max_size=8)


@st.composite
def mixed_sets(draw):
    system = draw(st.sampled_from(MIXED_SYSTEMS))
    chosen = draw(st.frozensets(st.integers(min_value=0, max_value=system.cell_count - 1)))
    return StructuredSet.build(system, chosen, plus=draw(far_sets), minus=draw(far_sets))


def _same(a, b, points):
    assert set_equal(a, b) is Verdict.TRUE
    assert a.count_below(HORIZON) == b.count_below(HORIZON)
    assert all(a.contains(x) == b.contains(x) for x in points)


def _almost_le(a, b) -> bool:
    return almost_compare(a, b) in (AlmostOrder.PRECEDES, AlmostOrder.EQUIVALENT)


class TestBooleanAlgebra:
    """Associativity and distributivity across refinable cell systems, checked below 10**4."""

    @given(mixed_sets(), mixed_sets(), mixed_sets(), far_sets)
    @SLOW_SETTINGS
    def test_associativity(self, a, b, c, points):
        _same(union(a, union(b, c)), union(union(a, b), c), points)
        _same(intersection(a, intersection(b, c)), intersection(intersection(a, b), c), points)

    @given(mixed_sets(), mixed_sets(), mixed_sets(), far_sets)
    @SLOW_SETTINGS
    def test_distributivity(self, a, b, c, points):
        _same(intersection(a, union(b, c)), union(intersection(a, b), intersection(a, c)), points)
        _same(union(a, intersection(b, c)), intersection(union(a, b), union(a, c)), points)

    @given(mixed_sets(), mixed_sets())
    @SLOW_SETTINGS
    def test_results_stay_structured(self, a, b):
        for combined in (union(a, b), intersection(a, b), difference(a, b)):
            assert isinstance(combined, StructuredSet)


class TestAlmostOrder:
    """Almost-inclusion is transitive on structured sets."""

    @given(mixed_sets(), mixed_sets(), mixed_sets())
    @SLOW_SETTINGS
    def test_transitive(self, a, b, c):
        if _almost_le(a, b) and _almost_le(b, c):
            assert _almost_le(a, c)

    @given(mixed_sets(), mixed_sets(), mixed_sets(), far_sets, far_sets)
    @SLOW_SETTINGS
    def test_transitive_along_chains(self, a, d, e, noise1, noise2):
        # a <= b <= c up to the finite noise
        b = union(union(a, d), finite_set(noise1))
        c = difference(union(b, e), finite_set(noise2))
        assert _almost_le(a, b)
        assert _almost_le(b, c)
        assert _almost_le(a, c)

    @given(mixed_sets(), mixed_sets(), mixed_sets())
    @SLOW_SETTINGS
    def test_equivalence_is_transitive(self, a, b, c):
        order = {AlmostOrder.EQUIVALENT}
        if almost_compare(a, b) in order and almost_compare(b, c) in order:
            assert almost_compare(a, c) in order


# ==================== Partitions ====================

PARTITION_SYSTEMS = [
    ResidueSystem(5),
    PowerRoundRobinSystem(3),
    BlockPartitionSystem(3),
    FactorialBlockSystem(),
    ProductSystem(2, PowerRoundRobinSystem(2)),
    ProductSystem(3, BlockPartitionSystem(2)),
]


class TestPartitionCounts:
    """Cell counts of a partition add up to the horizon."""

    @given(st.sampled_from(PARTITION_SYSTEMS), st.integers(min_value=0, max_value=HORIZON))
    @STANDARD_SETTINGS
    def test_cells_add_up(self, system, n):
        assert system.count_cells_below(range(system.cell_count), n) == n

    def test_zero_density_bins_at_every_horizon(self):
        inst = lower_density_instance(4)
        bins = [lang.expr for lang in inst.collection][1:]
        for n in range(HORIZON + 1):
            assert sum(b.count_below(n) for b in bins) == n

    def test_bins_of_a_base_set(self):
        base = evens()
        bins = zero_density_partition(base, 3)
        for n in range(0, HORIZON + 1, 7):
            assert sum(b.count_below(n) for b in bins) == base.count_below(n)


# ==================== Games ====================

def _play(gen, inst, seed, rounds=200):
    stream = finitely_repeating_enumeration(inst.target, 3, seed)
    return run_game(gen, stream, inst.target, rounds, SamplingConfig(every=100))


class TestTranscripts:
    """Seeded games are reproducible and replay from their inputs."""

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    @SLOW_SETTINGS
    def test_same_seed_same_transcript(self, seed):
        inst = sperner_hard_instance(4)
        first = _play(CanonicalIntersectionGenerator(inst.collection), inst, seed)
        second = _play(CanonicalIntersectionGenerator(inst.collection), inst, seed)
        pd.testing.assert_frame_equal(first.to_frame(), second.to_frame())
        assert first.t_star == second.t_star

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from([0, 1, 2]))
    @SLOW_SETTINGS
    def test_replay_reproduces_outputs(self, seed, capacity):
        inst = sperner_hard_instance(4)
        tr = _play(BufferGenerator(inst.collection, capacity), inst, seed, rounds=150)
        replayed = BufferGenerator(inst.collection, capacity).run([r.x for r in tr.rounds])
        assert replayed == [r.output for r in tr.rounds]


class TestMemorylessStatelessness:
    """A memoryless generator's output depends only on the current input."""

    @given(st.permutations(list(range(1, 40))))
    @SLOW_SETTINGS
    def test_permuted_streams(self, xs):
        inst = sperner_hard_instance(5)
        gen = CanonicalIntersectionGenerator(inst.collection)
        ordered = dict(zip(range(1, 40), gen.run(range(1, 40))))
        permuted = dict(zip(xs, gen.run(xs)))
        assert permuted == ordered


# ==================== Antichains ====================

def _maximal(n, bits):
    """Members of a family not strictly contained in another member."""
    family = sorted(set(bits))
    return [SubsetMask(n, b) for b in family if not any(b != c and b & ~c == 0 for c in family)]


class TestSpernerBound:
    """No antichain beats the middle layer."""

    @pytest.mark.parametrize("n", range(0, 7))
    def test_exhaustive_width(self, n):
        assert max_antichain_bruteforce(n) == sperner_width(n) == len(middle_layer(n))

    @given(st.integers(min_value=1, max_value=6), st.data())
    @STANDARD_SETTINGS
    def test_small_families_within_exhaustive_bound(self, n, data):
        bits = data.draw(st.lists(st.integers(min_value=0, max_value=(1 << n) - 1), max_size=64))
        family = _maximal(n, bits)
        assert is_antichain(family)
        assert len(family) <= sperner_width(n)

    @given(st.integers(min_value=7, max_value=12), st.data())
    @STANDARD_SETTINGS
    def test_sampled_families(self, n, data):
        bits = data.draw(st.lists(st.integers(min_value=0, max_value=(1 << n) - 1), min_size=1, max_size=300))
        family = _maximal(n, bits)
        assert is_antichain(family)
        assert len(family) <= sperner_width(n)

    @given(st.integers(min_value=7, max_value=12), st.data())
    @STANDARD_SETTINGS
    def test_sampled_layer_mixtures(self, n, data):
        # families drawn from the two layers next to the middle, which hold the largest antichains
        half = n // 2
        layers = [m for m in range(1 << n) if bin(m).count("1") in (half, half + 1)]
        bits = data.draw(st.lists(st.sampled_from(layers), min_size=1, max_size=300))
        assert len(_maximal(n, bits)) <= sperner_width(n)
