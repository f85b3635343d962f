"""
Enumeration streams: the adversary's side of a generation game.

A stream is an immutable description; iterate() hands out a fresh
iterator each time, so every run of a stream replays the same sequence.
"""

import logging
from abc import ABC, abstractmethod
from enum import Enum
from itertools import islice
from typing import Callable, Iterator, List, Optional

import numpy as np

from limitgen.config import Defaults
from limitgen.languages import Language

logger = logging.getLogger(__name__)


class RepetitionPolicy(Enum):
    REPETITION_FREE = "repetition_free"
    FINITELY_REPEATING = "finitely_repeating"
    ARBITRARY = "arbitrary"


class EnumerationStream(ABC):
    """
    Abstract base class for enumerations of a target language.

    Attributes:
        target: The language being enumerated.
        policy: Repetition guarantee of the stream.
        seed: Seed for any randomness; 0 for deterministic streams.
    """

    def __init__(self, target: Language, policy: RepetitionPolicy, seed: int = 0,
                 repetition_cap: Optional[int] = None):
        self.target = target
        self.policy = policy
        self.seed = seed
        self.repetition_cap = repetition_cap

    @abstractmethod
    def iterate(self) -> Iterator[int]:
        """Fresh iterator over the stream, from the first round."""
        pass

    @abstractmethod
    def deadline(self, n: int) -> int:
        """Round by which the n-th canonical member of the target has appeared."""
        pass

    def __iter__(self) -> Iterator[int]:
        return self.iterate()

    def take(self, n: int) -> List[int]:
        return list(islice(self.iterate(), n))

    def describe(self) -> str:
        return f"{self.__class__.__name__}({self.target.name}, {self.policy.value}, seed={self.seed})"

    def __repr__(self) -> str:
        return self.describe()


class CanonicalEnumeration(EnumerationStream):
    """The target's members in increasing order, each once."""

    def __init__(self, target: Language):
        super().__init__(target, RepetitionPolicy.REPETITION_FREE, repetition_cap=1)

    def iterate(self) -> Iterator[int]:
        return self.target.iter_members()

    def deadline(self, n: int) -> int:
        return n


class FinitelyRepeatingEnumeration(EnumerationStream):
    """
    Seeded enumeration in which every member appears between 1 and `cap` times.

    Canonical members are taken in blocks of `coverage_factor`; each gets a
    random multiplicity in [1, cap] and the block's multiset is shuffled.
    The n-th member has therefore appeared by round coverage_factor * n * cap.
    """

    def __init__(self, target: Language, cap: int, seed: int = 0,
                 coverage_factor: int = Defaults.COVERAGE_FACTOR):
        if cap < 1:
            raise ValueError(f"Repetition cap must be >= 1, got {cap}")
        if coverage_factor < 1:
            raise ValueError(f"coverage_factor must be >= 1, got {coverage_factor}")
        policy = RepetitionPolicy.REPETITION_FREE if cap == 1 else RepetitionPolicy.FINITELY_REPEATING
        super().__init__(target, policy, seed, repetition_cap=cap)
        self.cap = cap
        self.coverage_factor = coverage_factor

    def iterate(self) -> Iterator[int]:
        rng = np.random.default_rng(self.seed)
        members = self.target.iter_members()
        while True:
            block = list(islice(members, self.coverage_factor))
            if not block:
                return
            counts = rng.integers(1, self.cap + 1, size=len(block))
            items = [x for x, c in zip(block, counts) for _ in range(int(c))]
            for i in rng.permutation(len(items)):
                yield items[int(i)]

    def deadline(self, n: int) -> int:
        return self.coverage_factor * n * self.cap


class BadPointEnumeration(EnumerationStream):
    """x_1, b, x_2, b, ... where b is a fixed point (usually outside the target)."""

    def __init__(self, target: Language, bad_point: int):
        super().__init__(target, RepetitionPolicy.ARBITRARY)
        self.bad_point = bad_point

    def iterate(self) -> Iterator[int]:
        for x in self.target.iter_members():
            yield x
            yield self.bad_point

    def deadline(self, n: int) -> int:
        return 2 * n - 1


class ScheduledEnumeration(EnumerationStream):
    """
    A stream produced by an arbitrary schedule factory.

    Adversaries and fixed enumerations of hard instances use this to hand
    over a replayable sequence together with its coverage deadline.
    """

    def __init__(self, target: Language, schedule: Callable[[], Iterator[int]],
                 policy: RepetitionPolicy, deadline: Callable[[int], int],
                 label: str = "scheduled", repetition_cap: Optional[int] = None):
        super().__init__(target, policy, repetition_cap=repetition_cap)
        self.schedule = schedule
        self._deadline = deadline
        self.label = label

    def iterate(self) -> Iterator[int]:
        return iter(self.schedule())

    def deadline(self, n: int) -> int:
        return self._deadline(n)

    def describe(self) -> str:
        return f"{self.label}({self.target.name}, {self.policy.value})"
