"""
Set expressions over the domain of non-negative integers.

Two representations are supported:

- StructuredSet: a union of cells of a CellSystem plus finite corrections
  (elements added or removed). Membership, counting, indexing, set algebra,
  subset and finiteness questions are all answered exactly.
- OpaqueSet: a membership predicate together with an increasing
  enumerator. Questions are answered by probing up to a horizon, and
  verdicts may come back Unknown.

Mixing the two yields an OpaqueSet.
"""

import heapq
import logging
from bisect import bisect_left
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from limitgen.cells import CellSystem, TrivialSystem, refine
from limitgen.config import Defaults, ProbePolicy
from limitgen.exceptions import (
    IncompatibleCellSystemsError,
    OutOfRangeError,
    ProbeExhaustedError,
    SizeLimitError,
)
from limitgen.ranges import EMPTY, RangeSet

logger = logging.getLogger(__name__)

INFINITE_HORIZON = float("inf")


# ==================== Verdicts ====================

class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SubsetVerdict:
    """Outcome of a subset test. A False verdict carries the least counterexample found."""
    verdict: Verdict
    witness: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.TRUE

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FALSE

    @property
    def unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN


class Finiteness(Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class FinitenessVerdict:
    kind: Finiteness
    elements: Tuple[int, ...] = ()
    witnesses: Tuple[int, ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.kind is Finiteness.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.kind is Finiteness.INFINITE

    @property
    def is_unknown(self) -> bool:
        return self.kind is Finiteness.UNKNOWN


# ==================== Base ====================

class SetExpr(ABC):
    """Abstract set of non-negative integers."""

    @abstractmethod
    def contains(self, x: int) -> bool:
        pass

    @abstractmethod
    def nth_element(self, n: int) -> int:
        """n-th smallest member, 1-based. Raises OutOfRangeError past the end."""
        pass

    @abstractmethod
    def count_below(self, n: int) -> int:
        """Number of members strictly below n."""
        pass

    @abstractmethod
    def describe(self) -> str:
        pass

    @property
    def horizon(self) -> float:
        return INFINITE_HORIZON

    def __contains__(self, x: int) -> bool:
        return self.contains(x)

    def next_member(self, x: int) -> int:
        """Least member >= x."""
        return self.nth_element(self.count_below(x) + 1)

    def rank(self, x: int) -> int:
        """0-based canonical position of a member."""
        if not self.contains(x):
            raise ValueError(f"{x} is not a member of {self.describe()}")
        return self.count_below(x)

    def iter_members(self) -> Iterator[int]:
        n = 1
        while True:
            try:
                yield self.nth_element(n)
            except OutOfRangeError:
                return
            n += 1

    def take(self, n: int) -> List[int]:
        out = []
        for x in self.iter_members():
            if len(out) >= n:
                break
            out.append(x)
        return out

    def __and__(self, other: "SetExpr") -> "SetExpr":
        return intersection(self, other)

    def __or__(self, other: "SetExpr") -> "SetExpr":
        return union(self, other)

    def __sub__(self, other: "SetExpr") -> "SetExpr":
        return difference(self, other)

    def __str__(self) -> str:
        return self.describe()


# ==================== Structured sets ====================

def _as_ranges(values: Union[RangeSet, Iterable[int], None]) -> RangeSet:
    if values is None:
        return EMPTY
    if isinstance(values, RangeSet):
        return values
    return RangeSet.of(values)


def _restrict(system: CellSystem, r: RangeSet, cells: FrozenSet[int], inside: bool) -> RangeSet:
    """Elements of r whose label is (inside=True) or is not (inside=False) in cells."""
    if not r:
        return r
    if not cells:
        return EMPTY if inside else r
    if len(cells) == system.cell_count:
        return r if inside else EMPTY
    return r.filter(lambda x: (system.label(x) in cells) == inside)


@dataclass(frozen=True)
class StructuredSet(SetExpr):
    """
    (union of `cells`) minus `minus`, plus `plus`.

    Invariants: every element of `plus` is labeled outside `cells`, every
    element of `minus` inside. Use StructuredSet.build() to normalize raw
    corrections.
    """
    system: CellSystem
    cells: FrozenSet[int]
    plus: RangeSet = EMPTY
    minus: RangeSet = EMPTY
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))
        bad = [c for c in self.cells if not 0 <= c < self.system.cell_count]
        if bad:
            raise ValueError(f"Cells {bad} out of range for {self.system!r}")
        cap = Defaults.CORRECTION_CAP
        if len(self.plus) > cap or len(self.minus) > cap:
            raise SizeLimitError(f"Finite corrections exceed {cap} elements")
        if self.plus & self.minus:
            raise ValueError("plus and minus corrections overlap")

    @classmethod
    def build(
        cls,
        system: CellSystem,
        cells: Iterable[int],
        plus: Union[RangeSet, Iterable[int], None] = None,
        minus: Union[RangeSet, Iterable[int], None] = None,
        name: Optional[str] = None,
    ) -> "StructuredSet":
        """Normalizing constructor: corrections that change nothing are dropped."""
        cells = frozenset(cells)
        plus, minus = _as_ranges(plus), _as_ranges(minus)
        cap = Defaults.CORRECTION_CAP
        if len(plus) > cap or len(minus) > cap:
            raise SizeLimitError(f"Finite corrections exceed {cap} elements")
        minus = _restrict(system, minus, cells, inside=True)
        plus = _restrict(system, plus, cells, inside=False) - minus
        return cls(system, cells, plus, minus, name)

    def with_name(self, name: str) -> "StructuredSet":
        return StructuredSet(self.system, self.cells, self.plus, self.minus, name)

    # ---- membership and counting ----

    def contains(self, x: int) -> bool:
        if x < 0:
            return False
        if x in self.plus:
            return True
        return self.system.label(x) in self.cells and x not in self.minus

    def count_below(self, n: int) -> int:
        if n <= 0:
            return 0
        return (
            self.system.count_cells_below(self.cells, n)
            - self.minus.count_below(n)
            + self.plus.count_below(n)
        )

    @property
    def infinite_cells(self) -> FrozenSet[int]:
        return frozenset(c for c in self.cells if self.system.is_infinite(c))

    def is_exactly_finite(self) -> bool:
        return not self.infinite_cells

    def finite_elements(self) -> Tuple[int, ...]:
        if self.infinite_cells:
            raise ValueError(f"{self.describe()} is infinite")
        members = {x for c in self.cells for x in self.system.cell_elements(c)}
        members -= set(self.minus)
        members |= set(self.plus)
        return tuple(sorted(members))

    def is_empty(self) -> bool:
        if self.infinite_cells:
            return False
        return not self.finite_elements()

    def _correction_bound(self) -> int:
        bound = -1
        if self.plus:
            bound = max(bound, self.plus.max())
        if self.minus:
            bound = max(bound, self.minus.max())
        return bound

    def nth_element(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"Element index must be >= 1, got {n}")
        if not self.infinite_cells:
            members = self.finite_elements()
            if n > len(members):
                raise OutOfRangeError(f"{self.describe()} has {len(members)} elements, asked for #{n}")
            return members[n - 1]

        bound = self._correction_bound()
        below = self.count_below(bound + 1)
        if n > below:
            core_below = self.system.count_cells_below(self.cells, bound + 1)
            return self.system.nth_in(self.cells, n - below + core_below)
        lo, hi = 0, bound
        while lo < hi:
            mid = (lo + hi) // 2
            if self.count_below(mid + 1) >= n:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def describe(self) -> str:
        if self.name:
            return self.name
        if not self.cells:
            core = "{}"
        elif len(self.cells) == self.system.cell_count:
            core = "N"
        else:
            core = " | ".join(self.system.describe_cell(c) for c in sorted(self.cells))
        text = core
        if self.plus:
            text += f" + {self.plus!r}"
        if self.minus:
            text += f" - {self.minus!r}"
        return text

    def __repr__(self) -> str:
        return f"StructuredSet({self.describe()})"


# ==================== Opaque sets ====================

class OpaqueSet(SetExpr):
    """
    A set known only through a membership predicate and an increasing enumerator.

    The enumerator is a zero-argument callable returning a fresh ascending
    iterator of members. Elements are cached as they are produced. Any
    question that would require looking at values at or past the horizon
    raises ProbeExhaustedError.
    """

    def __init__(
        self,
        member: Callable[[int], bool],
        enumerator: Callable[[], Iterator[int]],
        name: str,
        params: Optional[dict] = None,
        horizon: Optional[int] = None,
        universe_bound: Optional[int] = None,
    ):
        self.member = member
        self.enumerator = enumerator
        self.name = name
        self.params = dict(params or {})
        self._horizon = horizon if horizon is not None else ProbePolicy.from_env().horizon
        self.universe_bound = universe_bound
        self._cache: List[int] = []
        self._iter: Optional[Iterator[int]] = None
        self._exhausted = False

    @property
    def horizon(self) -> float:
        return self._horizon

    @property
    def exhausted(self) -> bool:
        """True once the enumerator has ended, which proves the set finite."""
        return self._exhausted

    def _pull(self) -> bool:
        """Fetch one more member into the cache. False when the enumerator has ended."""
        if self._exhausted:
            return False
        if self._iter is None:
            self._iter = iter(self.enumerator())
        try:
            x = next(self._iter)
        except StopIteration:
            self._exhausted = True
            return False
        self._cache.append(x)
        return True

    def contains(self, x: int) -> bool:
        return x >= 0 and bool(self.member(x))

    def nth_element(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"Element index must be >= 1, got {n}")
        while len(self._cache) < n:
            if self._cache and self._cache[-1] >= self._horizon:
                raise ProbeExhaustedError(f"{self.name}: member #{n} lies past the horizon {self._horizon}")
            if not self._pull():
                raise OutOfRangeError(f"{self.name} has {len(self._cache)} elements, asked for #{n}")
        x = self._cache[n - 1]
        if x >= self._horizon:
            raise ProbeExhaustedError(f"{self.name}: member #{n} lies past the horizon {self._horizon}")
        return x

    def count_below(self, n: int) -> int:
        while not self._exhausted and (not self._cache or self._cache[-1] < n):
            if self._cache and self._cache[-1] >= self._horizon:
                raise ProbeExhaustedError(f"{self.name}: cannot count below {n} within horizon")
            if not self._pull():
                break
        return bisect_left(self._cache, n)

    def iter_members(self) -> Iterator[int]:
        i = 0
        while True:
            if i < len(self._cache):
                yield self._cache[i]
                i += 1
                continue
            if not self._pull():
                return

    def describe(self) -> str:
        if self.params:
            args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
            return f"{self.name}({args})"
        return self.name

    def __repr__(self) -> str:
        return f"OpaqueSet({self.describe()})"


def _bounded(source: Iterator[int], horizon: float, keep: Callable[[int], bool], name: str) -> Iterator[int]:
    """Filter an ascending iterator, giving up once values reach the horizon."""
    for x in source:
        if x >= horizon:
            raise ProbeExhaustedError(f"{name}: scan reached horizon {horizon}")
        if keep(x):
            yield x


def _merged(a: SetExpr, b: SetExpr) -> Iterator[int]:
    last = None
    for x in heapq.merge(a.iter_members(), b.iter_members()):
        if x != last:
            yield x
            last = x


def _finite_horizon(a: SetExpr, b: SetExpr) -> int:
    h = min(a.horizon, b.horizon)
    return int(h) if h != INFINITE_HORIZON else ProbePolicy.from_env().horizon


def _opaque_combine(a: SetExpr, b: SetExpr, op: str) -> OpaqueSet:
    horizon = _finite_horizon(a, b)
    name = f"({a.describe()} {op} {b.describe()})"
    if op == "&":
        return OpaqueSet(
            lambda x: a.contains(x) and b.contains(x),
            lambda: _bounded(a.iter_members(), horizon, b.contains, name),
            name, horizon=horizon,
        )
    if op == "|":
        return OpaqueSet(
            lambda x: a.contains(x) or b.contains(x),
            lambda: _merged(a, b),
            name, horizon=horizon,
        )
    return OpaqueSet(
        lambda x: a.contains(x) and not b.contains(x),
        lambda: _bounded(a.iter_members(), horizon, lambda x: not b.contains(x), name),
        name, horizon=horizon,
    )


# ==================== Structured algebra ====================

def _select(r: RangeSet, s: StructuredSet) -> RangeSet:
    """Elements of r that belong to s."""
    if not r:
        return r
    if s.system.cell_count == 1:
        return r - s.minus if s.cells else r & s.plus
    return r.filter(s.contains)


def _reject(r: RangeSet, s: StructuredSet) -> RangeSet:
    """Elements of r that do not belong to s."""
    if not r:
        return r
    if s.system.cell_count == 1:
        return r & s.minus if s.cells else r - s.plus
    return r.filter(lambda x: not s.contains(x))


def _structured_combine(a: StructuredSet, b: StructuredSet, op: str) -> StructuredSet:
    ref = refine(a.system, b.system)
    system = ref.system
    ca, cb = ref.lift_left(a.cells), ref.lift_right(b.cells)
    pa, ma, pb, mb = a.plus, a.minus, b.plus, b.minus

    if op == "&":
        cells = ca & cb
        minus = _restrict(system, ma | mb, cells, inside=True)
        plus = _select(pa, b) | _select(pb, a)
    elif op == "|":
        cells = ca | cb
        minus = _reject(ma, b) | _reject(mb, a)
        plus = _restrict(system, pa | pb, cells, inside=False)
    else:
        cells = ca - cb
        minus = _restrict(system, ma | pb, cells, inside=True)
        plus = (_restrict(system, mb, ca, inside=True) - ma) | _reject(pa, b)
    return StructuredSet(system, cells, plus, minus)


def _combine(a: SetExpr, b: SetExpr, op: str) -> SetExpr:
    if isinstance(a, StructuredSet) and isinstance(b, StructuredSet):
        try:
            return _structured_combine(a, b, op)
        except IncompatibleCellSystemsError as e:
            logger.debug(f"Falling back to opaque combination: {e}")
    return _opaque_combine(a, b, op)


def intersection(a: SetExpr, b: SetExpr) -> SetExpr:
    return _combine(a, b, "&")


def union(a: SetExpr, b: SetExpr) -> SetExpr:
    return _combine(a, b, "|")


def difference(a: SetExpr, b: SetExpr) -> SetExpr:
    return _combine(a, b, "-")


def symmetric_difference(a: SetExpr, b: SetExpr) -> SetExpr:
    return union(difference(a, b), difference(b, a))


def intersect_all(sets: Iterable[SetExpr]) -> SetExpr:
    """Intersection of a non-empty family; the empty family gives the universe."""
    result: Optional[SetExpr] = None
    for s in sets:
        result = s if result is None else intersection(result, s)
    return universe() if result is None else result


# ==================== Decisions ====================

def finiteness(s: SetExpr, policy: Optional[ProbePolicy] = None) -> FinitenessVerdict:
    """
    Decide whether s is finite.

    Exact for structured sets. Opaque sets are certified infinite once
    `witness_count` members turn up below the horizon, and finite only when
    the enumerator ends or a declared universe bound has been scanned.
    """
    policy = policy or ProbePolicy.from_env()
    if isinstance(s, StructuredSet):
        if s.is_exactly_finite():
            return FinitenessVerdict(Finiteness.FINITE, elements=s.finite_elements())
        return FinitenessVerdict(Finiteness.INFINITE, witnesses=tuple(s.take(policy.witness_count)))

    found: List[int] = []
    try:
        for x in s.iter_members():
            if x >= policy.horizon:
                break
            found.append(x)
            if len(found) >= policy.witness_count:
                return FinitenessVerdict(Finiteness.INFINITE, witnesses=tuple(found))
        else:
            return FinitenessVerdict(Finiteness.FINITE, elements=tuple(found))
    except ProbeExhaustedError:
        pass

    bound = getattr(s, "universe_bound", None) or policy.universe_bound
    if bound is not None and bound <= policy.horizon:
        return FinitenessVerdict(Finiteness.FINITE, elements=tuple(x for x in found if x < bound))
    return FinitenessVerdict(Finiteness.UNKNOWN, witnesses=tuple(found))


def is_infinite(s: SetExpr, policy: Optional[ProbePolicy] = None) -> Optional[bool]:
    """True/False, or None when the verdict is Unknown. Skips witness collection for structured sets."""
    if isinstance(s, StructuredSet):
        return not s.is_exactly_finite()
    verdict = finiteness(s, policy)
    if verdict.is_unknown:
        return None
    return verdict.is_infinite


def is_subset(a: SetExpr, b: SetExpr, policy: Optional[ProbePolicy] = None) -> SubsetVerdict:
    """
    Decide a <= b. Exact when both are structured over refinable systems,
    otherwise a probe of a's members below the horizon.
    """
    policy = policy or ProbePolicy.from_env()
    if isinstance(a, StructuredSet) and isinstance(b, StructuredSet):
        try:
            rest = _structured_combine(a, b, "-")
        except IncompatibleCellSystemsError:
            rest = None
        if rest is not None:
            if rest.is_empty():
                return SubsetVerdict(Verdict.TRUE)
            return SubsetVerdict(Verdict.FALSE, witness=rest.nth_element(1))

    try:
        for x in a.iter_members():
            if x >= policy.horizon:
                return SubsetVerdict(Verdict.UNKNOWN)
            if not b.contains(x):
                return SubsetVerdict(Verdict.FALSE, witness=x)
    except ProbeExhaustedError:
        return SubsetVerdict(Verdict.UNKNOWN)
    return SubsetVerdict(Verdict.TRUE)


def set_equal(a: SetExpr, b: SetExpr, policy: Optional[ProbePolicy] = None) -> Verdict:
    forward = is_subset(a, b, policy)
    if forward.fails:
        return Verdict.FALSE
    backward = is_subset(b, a, policy)
    if backward.fails:
        return Verdict.FALSE
    if forward.holds and backward.holds:
        return Verdict.TRUE
    return Verdict.UNKNOWN


# ==================== Common sets ====================

def universe() -> StructuredSet:
    return StructuredSet(TrivialSystem(), frozenset([0]), name="N")


def empty_set() -> StructuredSet:
    return StructuredSet(TrivialSystem(), frozenset(), name="{}")


def finite_set(elements: Iterable[int]) -> StructuredSet:
    return StructuredSet.build(TrivialSystem(), (), plus=elements)


def complement(s: SetExpr) -> SetExpr:
    return difference(universe(), s)
