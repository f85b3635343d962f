"""
Memoryless generators: the output depends on the current input alone.
"""

import logging
from typing import Callable, FrozenSet, Optional, Sequence, Tuple

from limitgen.config import ProbePolicy
from limitgen.exceptions import VerdictUnknownError
from limitgen.generators.base import (
    CollectionGenerator,
    Generator,
    GeneratorKind,
    GeneratorOutput,
    OutputMode,
    infinite_or_universe,
)
from limitgen.languages import Collection, Language, signature_intersection
from limitgen.sets import SetExpr, is_infinite

logger = logging.getLogger(__name__)

Bijection = Callable[[int], int]


def default_bijection(x: int) -> int:
    """Domain element to positive integer: x -> x + 1."""
    return x + 1


# ==================== Finite collections ====================

def canonical_intersection_step(coll: Collection, x: int, policy: Optional[ProbePolicy] = None) -> SetExpr:
    """I_x, the intersection of every language containing x, if infinite; else the universe."""
    return infinite_or_universe(signature_intersection(coll, x), policy)


class CanonicalIntersectionGenerator(CollectionGenerator):
    """Outputs the canonical intersection of the current input."""

    kind = GeneratorKind.MEMORYLESS
    mode = OutputMode.SET

    def initial_state(self) -> None:
        return None

    def step(self, state: None, x: int) -> Tuple[GeneratorOutput, None]:
        return GeneratorOutput.of_set(canonical_intersection_step(self.collection, x, self.policy)), None


# ==================== Countable collections ====================

def memoryless_countable_step(
    coll: Collection,
    x: int,
    bijection: Bijection = default_bijection,
    policy: Optional[ProbePolicy] = None,
) -> SetExpr:
    """
    J_{n(x)}(x) where J_n(x) intersects the languages among L_1 .. L_n that
    contain x and n(x) is the largest n <= bijection(x) leaving J_n(x) infinite.

    J_n only shrinks as n grows and changes only at indices in the
    signature, so a binary search over signature prefixes finds n(x).
    """
    top = bijection(x)
    if top < 1:
        raise ValueError(f"bijection({x}) must be a positive integer, got {top}")
    sig: Sequence[int] = coll.signature(x, upto=top)

    def infinite_prefix(m: int) -> bool:
        verdict = is_infinite(coll.meet(sig[:m]), policy)
        if verdict is None:
            raise VerdictUnknownError(f"Finiteness of J_n({x}) is Unknown (first {m} signature languages)")
        return verdict

    lo, hi = 0, len(sig)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if infinite_prefix(mid):
            lo = mid
        else:
            hi = mid - 1
    return coll.meet(sig[:lo])


class CountableMemorylessGenerator(CollectionGenerator):
    """Memoryless set-based generator for countable collections."""

    kind = GeneratorKind.MEMORYLESS_COUNTABLE
    mode = OutputMode.SET

    def __init__(self, collection: Collection, bijection: Bijection = default_bijection,
                 policy: Optional[ProbePolicy] = None):
        super().__init__(collection, policy)
        self.bijection = bijection

    def initial_state(self) -> None:
        return None

    def step(self, state: None, x: int) -> Tuple[GeneratorOutput, None]:
        out = memoryless_countable_step(self.collection, x, self.bijection, self.policy)
        return GeneratorOutput.of_set(out), None


# ==================== Arbitrary rules ====================

class MemorylessElementGenerator(Generator):
    """Wraps a rule x -> g(x) as an element-based memoryless generator."""

    kind = GeneratorKind.MEMORYLESS
    mode = OutputMode.ELEMENT

    def __init__(self, rule: Callable[[int], int], name: str = "rule"):
        self.rule = rule
        self.name = name

    def initial_state(self) -> None:
        return None

    def step(self, state: None, x: int) -> Tuple[GeneratorOutput, None]:
        return GeneratorOutput.of_element(self.rule(x)), None

    def describe(self) -> str:
        return f"MemorylessElementGenerator({self.name})"


class MemorylessIndexGenerator(CollectionGenerator):
    """Wraps a rule x -> index as an index-based memoryless generator."""

    kind = GeneratorKind.MEMORYLESS
    mode = OutputMode.INDEX

    def __init__(self, collection: Collection, rule: Callable[[int], int], name: str = "rule"):
        super().__init__(collection)
        self.rule = rule
        self.name = name

    def initial_state(self) -> None:
        return None

    def step(self, state: None, x: int) -> Tuple[GeneratorOutput, None]:
        return GeneratorOutput.of_index(self.rule(x)), None

    def hypothesis(self, index: int) -> Language:
        return self.collection.language(index)

    def describe(self) -> str:
        return f"MemorylessIndexGenerator({self.name})"


# ==================== Length thresholds ====================

def threshold_element_step(low: int, presented: FrozenSet[int]) -> int:
    """Least element >= low that has not been presented."""
    y = low
    while y in presented:
        y += 1
    return y


class ThresholdElementGenerator(Generator):
    """
    Element generator for the length-threshold languages {x : x >= l}.

    Every threshold language containing the smallest input seen so far
    contains everything above it, so the least unpresented element at or
    above that minimum is always a fresh target member.
    """

    kind = GeneratorKind.THRESHOLD_ELEMENT
    mode = OutputMode.ELEMENT

    def initial_state(self) -> Tuple[Optional[int], FrozenSet[int]]:
        return None, frozenset()

    def step(self, state: Tuple[Optional[int], FrozenSet[int]], x: int):
        low, presented = state
        low = x if low is None else min(low, x)
        presented = presented | {x}
        return GeneratorOutput.of_element(threshold_element_step(low, presented)), (low, presented)
