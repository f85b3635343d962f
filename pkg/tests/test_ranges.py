"""
Tests for interval-backed finite integer sets.
"""

import pytest

from limitgen.ranges import EMPTY, RangeSet


class TestRangeSetConstruction:
    """Normalization of intervals."""

    def test_of_merges_adjacent(self):
        r = RangeSet.of([1, 2, 3, 7, 8])
        assert r.intervals == ((1, 4), (7, 9))

    def test_from_intervals_merges_overlaps(self):
        r = RangeSet.from_intervals([(5, 10), (0, 3), (2, 6)])
        assert r.intervals == ((0, 10),)

    def test_empty_intervals_dropped(self):
        assert RangeSet.from_intervals([(4, 4), (6, 5)]) == EMPTY
        assert not EMPTY

    def test_repr(self):
        assert repr(RangeSet.of([0, 1, 2, 5])) == "{0..2, 5}"


class TestRangeSetQueries:
    """Membership, counting and bounds."""

    def setup_method(self):
        self.r = RangeSet.from_intervals([(0, 10), (20, 25)])

    def test_contains(self):
        assert 0 in self.r
        assert 9 in self.r
        assert 10 not in self.r
        assert 22 in self.r
        assert -1 not in self.r

    def test_len_and_iter(self):
        assert len(self.r) == 15
        assert list(self.r)[-1] == 24

    def test_count_below(self):
        assert self.r.count_below(0) == 0
        assert self.r.count_below(5) == 5
        assert self.r.count_below(21) == 11
        assert self.r.count_below(10 ** 9) == 15

    def test_min_max(self):
        assert self.r.min() == 0
        assert self.r.max() == 24
        with pytest.raises(ValueError):
            EMPTY.max()

    def test_filter(self):
        assert self.r.filter(lambda x: x % 5 == 0).to_list() == [0, 5, 20]


class TestRangeSetAlgebra:
    """Union, intersection and difference."""

    def test_or(self):
        a = RangeSet.interval(0, 5)
        b = RangeSet.interval(3, 8)
        assert (a | b).intervals == ((0, 8),)

    def test_and(self):
        a = RangeSet.from_intervals([(0, 5), (10, 15)])
        b = RangeSet.interval(3, 12)
        assert (a & b).to_list() == [3, 4, 10, 11]

    def test_sub(self):
        a = RangeSet.interval(0, 10)
        b = RangeSet.from_intervals([(2, 4), (6, 7)])
        assert (a - b).to_list() == [0, 1, 4, 5, 7, 8, 9]

    def test_sub_everything(self):
        a = RangeSet.of([1, 2, 3])
        assert a - RangeSet.interval(0, 100) == EMPTY

    def test_large_runs_stay_cheap(self):
        big = RangeSet.interval(0, 10 ** 12)
        cut = big - RangeSet.interval(10, 10 ** 12 - 10)
        assert len(cut) == 20
        assert cut.count_below(10 ** 12) == 20
