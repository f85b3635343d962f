"""
Finite sets of non-negative integers stored as sorted, disjoint, half-open
intervals. Used for the finite corrections of structured sets, where long
runs such as "everything below 10**4" must stay cheap to combine.
"""

from bisect import bisect_right
from functools import cached_property
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Tuple

Interval = Tuple[int, int]


def _normalize(intervals: Iterable[Interval]) -> Tuple[Interval, ...]:
    merged: List[List[int]] = []
    for start, stop in sorted(iv for iv in intervals if iv[0] < iv[1]):
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], stop)
        else:
            merged.append([start, stop])
    return tuple((a, b) for a, b in merged)


@dataclass(frozen=True)
class RangeSet:
    """Immutable finite integer set. Intervals are [start, stop), non-adjacent."""
    intervals: Tuple[Interval, ...] = ()

    # ---- construction ----

    @classmethod
    def of(cls, elements: Iterable[int]) -> "RangeSet":
        return cls(_normalize((x, x + 1) for x in elements))

    @classmethod
    def interval(cls, start: int, stop: int) -> "RangeSet":
        return cls(_normalize([(start, stop)]))

    @classmethod
    def from_intervals(cls, intervals: Iterable[Interval]) -> "RangeSet":
        return cls(_normalize(intervals))

    # ---- queries ----

    def __contains__(self, x: int) -> bool:
        i = bisect_right(self._starts, x) - 1
        return i >= 0 and x < self.intervals[i][1]

    def __len__(self) -> int:
        return sum(b - a for a, b in self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __iter__(self) -> Iterator[int]:
        for a, b in self.intervals:
            yield from range(a, b)

    @cached_property
    def _starts(self) -> List[int]:
        return [a for a, _ in self.intervals]

    def count_below(self, n: int) -> int:
        """Number of members strictly below n."""
        total = 0
        for a, b in self.intervals:
            if a >= n:
                break
            total += min(b, n) - a
        return total

    def max(self) -> int:
        if not self.intervals:
            raise ValueError("max() of an empty RangeSet")
        return self.intervals[-1][1] - 1

    def min(self) -> int:
        if not self.intervals:
            raise ValueError("min() of an empty RangeSet")
        return self.intervals[0][0]

    def filter(self, keep: Callable[[int], bool]) -> "RangeSet":
        return RangeSet.of(x for x in self if keep(x))

    def to_list(self) -> List[int]:
        return list(self)

    # ---- algebra ----

    def __or__(self, other: "RangeSet") -> "RangeSet":
        return RangeSet(_normalize(self.intervals + other.intervals))

    def __and__(self, other: "RangeSet") -> "RangeSet":
        out: List[Interval] = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return RangeSet(tuple(out))

    def __sub__(self, other: "RangeSet") -> "RangeSet":
        out: List[Interval] = []
        cuts = other.intervals
        j = 0
        for start, stop in self.intervals:
            cur = start
            while j < len(cuts) and cuts[j][1] <= cur:
                j += 1
            k = j
            while k < len(cuts) and cuts[k][0] < stop:
                if cuts[k][0] > cur:
                    out.append((cur, cuts[k][0]))
                cur = max(cur, cuts[k][1])
                k += 1
            if cur < stop:
                out.append((cur, stop))
        return RangeSet(tuple(out))

    def __repr__(self) -> str:
        parts = [str(a) if b == a + 1 else f"{a}..{b - 1}" for a, b in self.intervals]
        return "{" + ", ".join(parts) + "}"


EMPTY = RangeSet()
