"""
Subset-lattice combinatorics behind the minimax density constants.

Subsets of [n] = {1, ..., n} are bit masks, little-endian: element j is
bit j - 1.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

import numpy as np

from limitgen.config import Defaults
from limitgen.exceptions import LimitGenError, SizeLimitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class SubsetMask:
    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"Mask {self.bits} is not a subset of [{self.n}]")

    @classmethod
    def from_members(cls, n: int, members: Iterable[int]) -> "SubsetMask":
        bits = 0
        for j in members:
            if not 1 <= j <= n:
                raise ValueError(f"{j} is not in [{n}]")
            bits |= 1 << (j - 1)
        return cls(n, bits)

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(j + 1 for j in range(self.n) if self.bits >> j & 1)

    @property
    def size(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, j: int) -> bool:
        return 1 <= j <= self.n and bool(self.bits >> (j - 1) & 1)

    def issubset(self, other: "SubsetMask") -> bool:
        return self.bits & ~other.bits == 0

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


# ==================== Sperner ====================

def sperner_width(n: int) -> int:
    """C(n, floor(n/2)): the size of the largest antichain in the subsets of [n]."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return comb(n, n // 2)


def middle_layer(n: int) -> List[SubsetMask]:
    """All floor(n/2)-subsets of [n], in increasing mask order."""
    half = n // 2
    masks = [SubsetMask.from_members(n, c) for c in combinations(range(1, n + 1), half)]
    return sorted(masks, key=lambda m: m.bits)


def is_antichain(family: Sequence[SubsetMask]) -> bool:
    for a, b in combinations(family, 2):
        if a.issubset(b) or b.issubset(a):
            return False
    return True


def _strict_supersets(n: int) -> List[List[int]]:
    """For every mask of [n], the masks strictly containing it."""
    masks = np.arange(1 << n)
    inside = (masks[:, None] & masks[None, :]) == masks[:, None]
    above = inside & (masks[:, None] != masks[None, :])
    return [np.flatnonzero(row).tolist() for row in above]


def _min_chain_cover(nodes: Set[int], above: List[List[int]]) -> int:
    """Fewest chains covering `nodes`: |nodes| minus a maximum matching of strict containments."""
    match: Dict[int, int] = {}

    def augment(a: int, seen: Set[int]) -> bool:
        for b in above[a]:
            if b in nodes and b not in seen:
                seen.add(b)
                if b not in match or augment(match[b], seen):
                    match[b] = a
                    return True
        return False

    return len(nodes) - sum(1 for a in nodes if augment(a, set()))


def max_antichain_bruteforce(n: int) -> int:
    """
    Largest antichain among the subsets of [n] by exact search (n <= 6).

    A minimum chain cover of the remaining candidates bounds how many of
    them an antichain can still take. Subsets are visited middle layer
    first; each is kept only if the bound stays tight, so the search ends
    with an explicit antichain whose size meets the cover.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > Defaults.ANTICHAIN_SEARCH_MAX_N:
        raise SizeLimitError(
            f"Exhaustive antichain search is limited to n <= {Defaults.ANTICHAIN_SEARCH_MAX_N}, got {n}"
        )
    above = _strict_supersets(n)
    comparable = [{v} for v in range(1 << n)]
    for lower, uppers in enumerate(above):
        for upper in uppers:
            comparable[lower].add(upper)
            comparable[upper].add(lower)

    candidates = set(range(1 << n))
    width = _min_chain_cover(candidates, above)
    chosen: List[int] = []
    for v in sorted(candidates, key=lambda b: (abs(2 * bin(b).count("1") - n), b)):
        if v not in candidates:
            continue
        rest = candidates - comparable[v]
        rest_width = _min_chain_cover(rest, above)
        if rest_width + 1 == width:
            chosen.append(v)
            candidates, width = rest, rest_width
        else:
            candidates.discard(v)

    family = [SubsetMask(n, b) for b in chosen]
    if not is_antichain(family):
        raise LimitGenError(f"Antichain search for n={n} kept comparable subsets")
    logger.debug(f"Largest antichain for n={n}: {len(family)} subsets")
    return len(family)


# ==================== Symmetric chains ====================

def _bracket_match(n: int, bits: int) -> Tuple[FrozenSet[int], Tuple[int, ...]]:
    """
    Read positions 1..n left to right; a member is ')' and a non-member '('.
    Returns (matched positions, unmatched positions in order).
    """
    open_stack: List[int] = []
    matched = set()
    unmatched_close: List[int] = []
    for j in range(1, n + 1):
        if bits >> (j - 1) & 1:
            if open_stack:
                matched.add(open_stack.pop())
                matched.add(j)
            else:
                unmatched_close.append(j)
        else:
            open_stack.append(j)
    unmatched = tuple(sorted(unmatched_close + open_stack))
    return frozenset(matched), unmatched


def symmetric_chain_decomposition(n: int) -> List[List[SubsetMask]]:
    """
    Partition the subsets of [n] into symmetric saturated chains.

    Uses the bracketing rule: a chain starts at a mask whose unmatched
    positions are all non-members and grows by adding those positions left
    to right. Chains are ordered by their smallest mask.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > Defaults.SCD_MAX_N:
        raise SizeLimitError(f"Symmetric chain decomposition is limited to n <= {Defaults.SCD_MAX_N}")
    chains = []
    for bits in range(1 << n):
        _, unmatched = _bracket_match(n, bits)
        if any(bits >> (j - 1) & 1 for j in unmatched):
            continue
        chain = [SubsetMask(n, bits)]
        current = bits
        for j in unmatched:
            current |= 1 << (j - 1)
            chain.append(SubsetMask(n, current))
        chains.append(chain)
    chains.sort(key=lambda c: c[0].bits)
    logger.debug(f"Symmetric chain decomposition of [{n}]: {len(chains)} chains")
    return chains


def chain_of(mask: SubsetMask) -> List[SubsetMask]:
    """The chain of the bracketing decomposition that contains `mask`."""
    _, unmatched = _bracket_match(mask.n, mask.bits)
    base = mask.bits
    for j in unmatched:
        base &= ~(1 << (j - 1))
    chain = [SubsetMask(mask.n, base)]
    current = base
    for j in unmatched:
        current |= 1 << (j - 1)
        chain.append(SubsetMask(mask.n, current))
    return chain


def is_symmetric_chain_decomposition(n: int, chains: Sequence[Sequence[SubsetMask]]) -> bool:
    seen: Dict[int, int] = {}
    for chain in chains:
        if not chain:
            return False
        if chain[0].size + chain[-1].size != n:
            return False
        for a, b in zip(chain, chain[1:]):
            if not a.issubset(b) or b.size != a.size + 1:
                return False
        for m in chain:
            seen[m.bits] = seen.get(m.bits, 0) + 1
    return len(seen) == 1 << n and all(v == 1 for v in seen.values())


# ==================== Minimax constants ====================

def minimax_memoryless(k: int) -> Fraction:
    """Best upper density a memoryless generator can guarantee on k languages."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        return Fraction(1)
    return Fraction(1, sperner_width(k - 1))


def minimax_buffer(k: int, b: int) -> Fraction:
    """Best upper density with a buffer of b stored elements."""
    if k < 1 or b < 0:
        raise ValueError(f"Need k >= 1 and b >= 0, got k={k}, b={b}")
    if b >= k - 2:
        return Fraction(1)
    return Fraction(1, sperner_width(k - b - 1))


def buffer_improvement_ratio(k: int, b: int) -> Fraction:
    """minimax_buffer(k, b) / minimax_memoryless(k)."""
    return minimax_buffer(k, b) / minimax_memoryless(k)
