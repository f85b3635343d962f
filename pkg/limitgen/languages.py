"""
Languages, collections of languages, signatures and almost-containment.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence

from limitgen.builtins import at_least
from limitgen.config import ProbePolicy
from limitgen.exceptions import EmptySignatureError, VerdictUnknownError
from limitgen.sets import (
    Finiteness,
    SetExpr,
    Verdict,
    difference,
    finiteness,
    intersect_all,
    is_infinite,
    set_equal,
    universe,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Language:
    """An infinite set with a display name. Finite candidates are rejected at construction."""
    expr: SetExpr
    name: str

    def __post_init__(self):
        verdict = is_infinite(self.expr)
        if verdict is None:
            raise VerdictUnknownError(f"Cannot certify that language '{self.name}' is infinite")
        if not verdict:
            raise ValueError(f"Language '{self.name}' is finite")

    def contains(self, x: int) -> bool:
        return self.expr.contains(x)

    def __contains__(self, x: int) -> bool:
        return self.expr.contains(x)

    def nth_element(self, n: int) -> int:
        return self.expr.nth_element(n)

    def count_below(self, n: int) -> int:
        return self.expr.count_below(n)

    def iter_members(self):
        return self.expr.iter_members()

    def take(self, n: int) -> List[int]:
        return self.expr.take(n)

    def __repr__(self) -> str:
        return f"Language({self.name!r})"


# ==================== Collections ====================

class Collection(ABC):
    """An indexed family of languages, indices starting at 1."""

    name: str = "collection"

    @abstractmethod
    def language(self, i: int) -> Language:
        pass

    @property
    @abstractmethod
    def size(self) -> Optional[int]:
        """Number of languages, or None for a countably infinite collection."""
        pass

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    def __getitem__(self, i: int) -> Language:
        return self.language(i)

    def prefix(self, n: int) -> List[Language]:
        return [self.language(i) for i in range(1, n + 1)]

    def indices(self, upto: Optional[int] = None) -> range:
        if upto is None:
            if self.size is None:
                raise ValueError(f"{self.name} is countably infinite; pass upto=")
            upto = self.size
        elif self.size is not None:
            upto = min(upto, self.size)
        return range(1, upto + 1)

    def signature(self, x: int, upto: Optional[int] = None) -> Sequence[int]:
        """Indices (ascending) of the languages among the first `upto` that contain x."""
        return [i for i in self.indices(upto) if self.language(i).contains(x)]

    def meet(self, indices: Iterable[int]) -> SetExpr:
        """Intersection of the listed languages; the universe for no indices."""
        return intersect_all(self.language(i).expr for i in indices)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name!r})"


class FiniteCollection(Collection):
    """
    A finite, duplicate-free list of languages.

    Duplicates are detected exactly for structured languages; pairs whose
    equality cannot be decided are accepted with a debug log line.
    """

    def __init__(self, languages: Sequence[Language], name: str = "collection",
                 policy: Optional[ProbePolicy] = None):
        if not languages:
            raise ValueError("A collection needs at least one language")
        self.languages = list(languages)
        self.name = name
        for (i, a), (j, b) in combinations(enumerate(self.languages, start=1), 2):
            verdict = set_equal(a.expr, b.expr, policy)
            if verdict is Verdict.TRUE:
                raise ValueError(f"Languages {i} ({a.name}) and {j} ({b.name}) are equal")
            if verdict is Verdict.UNKNOWN:
                logger.debug(f"Could not certify that languages {i} and {j} differ")

    @property
    def size(self) -> Optional[int]:
        return len(self.languages)

    def language(self, i: int) -> Language:
        if not 1 <= i <= len(self.languages):
            raise IndexError(f"Language index {i} out of range 1..{len(self.languages)}")
        return self.languages[i - 1]

    def __len__(self) -> int:
        return len(self.languages)

    def __iter__(self):
        return iter(self.languages)

    def index_of(self, language: Language) -> int:
        for i, candidate in enumerate(self.languages, start=1):
            if candidate is language:
                return i
        raise ValueError(f"{language!r} is not in {self.name}")

    def subcollection(self, indices: Iterable[int]) -> List[Language]:
        return [self.language(i) for i in sorted(indices)]


class CountableCollection(Collection):
    """A countable collection given by an index function; languages are built on demand."""

    def __init__(self, index_fn: Callable[[int], Language], name: str = "countable"):
        self.index_fn = index_fn
        self.name = name
        self._cache: Dict[int, Language] = {}

    @property
    def size(self) -> Optional[int]:
        return None

    def language(self, i: int) -> Language:
        if i < 1:
            raise IndexError(f"Language index must be >= 1, got {i}")
        if i not in self._cache:
            self._cache[i] = self.index_fn(i)
        return self._cache[i]


class CyclicCollection(CountableCollection):
    """A finite list repeated forever: L_i = languages[(i - 1) mod k]."""

    def __init__(self, languages: Sequence[Language], name: str = "cyclic"):
        self.base = list(languages)
        super().__init__(lambda i: self.base[(i - 1) % len(self.base)], name)

    def meet(self, indices: Iterable[int]) -> SetExpr:
        distinct = sorted({(i - 1) % len(self.base) + 1 for i in indices})
        return super().meet(distinct)


class LengthThresholdCollection(CountableCollection):
    """L_l = {x : x >= l} for l = 1, 2, ... with closed-form signatures and meets."""

    def __init__(self):
        super().__init__(lambda i: Language(at_least(i), f"x >= {i}"), "length thresholds")

    def signature(self, x: int, upto: Optional[int] = None) -> Sequence[int]:
        if upto is None:
            raise ValueError(f"{self.name} is countably infinite; pass upto=")
        return range(1, min(upto, x) + 1)

    def meet(self, indices: Iterable[int]) -> SetExpr:
        indices = list(indices)
        if not indices:
            return universe()
        return at_least(max(indices))


# ==================== Signatures ====================

def signature(coll: Collection, x: int, upto: Optional[int] = None) -> FrozenSet[int]:
    """S(x): indices of languages containing x."""
    return frozenset(coll.signature(x, upto))


def signature_intersection(coll: Collection, x: int, upto: Optional[int] = None) -> SetExpr:
    """I_x: intersection of all languages containing x."""
    indices = coll.signature(x, upto)
    if not indices:
        raise EmptySignatureError(f"{x} lies in no language of {coll.name}")
    return coll.meet(indices)


# ==================== Almost containment ====================

class AlmostOrder(Enum):
    PRECEDES = "precedes"        # a is almost contained in b, not conversely
    FOLLOWS = "follows"          # b is almost contained in a, not conversely
    EQUIVALENT = "equivalent"    # finite symmetric difference
    INCOMPARABLE = "incomparable"
    UNKNOWN = "unknown"


def almost_compare(a: SetExpr, b: SetExpr, policy: Optional[ProbePolicy] = None) -> AlmostOrder:
    """Compare two sets up to finitely many elements."""
    a_rest = finiteness(difference(a, b), policy).kind
    b_rest = finiteness(difference(b, a), policy).kind
    if Finiteness.UNKNOWN in (a_rest, b_rest):
        return AlmostOrder.UNKNOWN
    a_in_b = a_rest is Finiteness.FINITE
    b_in_a = b_rest is Finiteness.FINITE
    if a_in_b and b_in_a:
        return AlmostOrder.EQUIVALENT
    if a_in_b:
        return AlmostOrder.PRECEDES
    if b_in_a:
        return AlmostOrder.FOLLOWS
    return AlmostOrder.INCOMPARABLE
