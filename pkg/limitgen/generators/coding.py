"""
Element-based generation with one word of memory.

The generator's only state is its previous output. Every output is a
codeword: it sits in one of N pairwise disjoint cofinal subsets C_i of the
languages, and its rank inside C_i encodes the whole input history and a
nonce. Each round decodes the history, appends the new input, asks the
full-information identifier for a language and emits the next codeword
from that language's subset that exceeds both the previous output and
the input.
"""

import logging
from itertools import count
from math import isqrt, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from limitgen.cells import ResidueSystem
from limitgen.config import Defaults, ProbePolicy
from limitgen.exceptions import DecodeFailureError, ProbeExhaustedError, SizeLimitError
from limitgen.generators.base import CollectionGenerator, GeneratorKind, GeneratorOutput, OutputMode
from limitgen.generators.incremental import FullInformationIdentifier
from limitgen.languages import FiniteCollection
from limitgen.ranges import RangeSet
from limitgen.sets import OpaqueSet, SetExpr, StructuredSet, union

logger = logging.getLogger(__name__)


# ==================== Pairing ====================

def pair(u: int, n: int) -> int:
    """Cantor pairing: (u + n)(u + n + 1)/2 + n."""
    if u < 0 or n < 0:
        raise ValueError(f"pair() takes non-negative integers, got ({u}, {n})")
    s = u + n
    return s * (s + 1) // 2 + n


def unpair(z: int) -> Tuple[int, int]:
    if z < 0:
        raise ValueError(f"unpair() takes a non-negative integer, got {z}")
    w = (isqrt(8 * z + 1) - 1) // 2
    n = z - w * (w + 1) // 2
    return w - n, n


def seq_encode(seq: Sequence[int]) -> int:
    """code(()) = 0 and code(s + (x,)) = pair(code(s), x) + 1."""
    code = 0
    for x in seq:
        code = pair(code, x) + 1
    return code


def seq_decode(code: int) -> Tuple[int, ...]:
    if code < 0:
        raise ValueError(f"Sequence codes are non-negative, got {code}")
    out: List[int] = []
    while code > 0:
        code, x = unpair(code - 1)
        out.append(x)
    return tuple(reversed(out))


# ==================== Cofinal subsets ====================

class CofinalRecursion:
    """
    Runs the disjoint cofinal-subset recursion: at step t (t = 1, 2, ...)
    language i, in index order, takes its least member that is >= t and
    not yet taken by anyone.
    """

    def __init__(self, languages: Sequence[SetExpr]):
        self.languages = list(languages)
        self.picks: List[List[int]] = [[] for _ in self.languages]
        self.used: set = set()
        self.steps = 0

    def advance(self) -> List[int]:
        self.steps += 1
        t = self.steps
        chosen = []
        for i, lang in enumerate(self.languages):
            y = lang.next_member(t)
            while y in self.used:
                y = lang.next_member(y + 1)
            self.used.add(y)
            self.picks[i].append(y)
            chosen.append(y)
        return chosen

    def run_until(self, steps: int) -> None:
        while self.steps < steps:
            self.advance()


def _lazy_cofinal_sets(languages: Sequence[SetExpr], horizon: int) -> List[SetExpr]:
    recursion = CofinalRecursion(languages)

    def member_of(i: int):
        def member(x: int) -> bool:
            recursion.run_until(x + 1)
            return x in recursion.picks[i]
        return member

    def enumerate_from(i: int):
        def gen():
            k = 0
            while True:
                recursion.run_until(k + 1)
                yield recursion.picks[i][k]
                k += 1
        return gen

    return [
        OpaqueSet(member_of(i), enumerate_from(i), f"C_{i + 1}", horizon=horizon)
        for i in range(len(languages))
    ]


def _periodic_cofinal_sets(languages: Sequence[StructuredSet], search_limit: int) -> Optional[List[StructuredSet]]:
    """
    Closed forms for the cofinal subsets of periodic structured languages.

    Past the corrections, the future of the recursion depends only on the
    least untaken member g of the union (mod the period) and on the taken
    elements at or above g. When that pair repeats, every C_i is eventually
    periodic and is returned as residues mod the shift plus corrections.
    """
    period = 1
    bound = 0
    for lang in languages:
        if lang.system.period is None:
            return None
        period = lcm(period, lang.system.period)
        if lang.plus:
            bound = max(bound, lang.plus.max() + 1)
        if lang.minus:
            bound = max(bound, lang.minus.max() + 1)
    whole = languages[0]
    for lang in languages[1:]:
        whole = union(whole, lang)
    if not isinstance(whole, StructuredSet):
        return None

    recursion = CofinalRecursion(languages)
    seen: Dict[tuple, Tuple[int, int]] = {}
    frontier: List[int] = []
    for t in range(1, search_limit + 1):
        frontier.extend(recursion.advance())
        g = whole.next_member(t + 1)
        while g in recursion.used:
            g = whole.next_member(g + 1)
        frontier = [u for u in frontier if u >= g]
        if g < bound:
            continue
        key = (g % period, frozenset(u - g for u in frontier))
        if key not in seen:
            seen[key] = (t, g)
            continue
        t1, g1 = seen[key]
        shift = g - g1
        logger.debug(f"Cofinal recursion repeats: steps {t1}->{t}, shift {shift}")
        return [_close_form(picks, t1, t, shift) for picks in recursion.picks]
    logger.info(f"No period found for the cofinal recursion within {search_limit} steps")
    return None


def _close_form(picks: List[int], t1: int, t2: int, shift: int) -> StructuredSet:
    block = picks[t1:t2]
    top = max(picks[:t2]) + 1
    explicit = set(picks[:t1])
    for c in block:
        explicit.update(range(c, top, shift))
    classes = frozenset(c % shift for c in block)
    system = ResidueSystem(shift)
    below = [y for y in range(top) if y % shift in classes and y not in explicit]
    return StructuredSet.build(system, classes, plus=RangeSet.of(explicit), minus=RangeSet.of(below))


def cofinal_subsets(coll: FiniteCollection, search_limit: int = Defaults.PERIOD_SEARCH_LIMIT,
                    policy: Optional[ProbePolicy] = None) -> List[SetExpr]:
    """
    Pairwise disjoint infinite C_i, each contained in L_i, whose union
    reaches past every threshold. Structured and periodic collections get
    exact closed forms; anything else gets lazily enumerated sets.
    """
    languages = [coll.language(i).expr for i in coll.indices()]
    if all(isinstance(lang, StructuredSet) for lang in languages):
        try:
            closed = _periodic_cofinal_sets(languages, search_limit)
        except SizeLimitError as e:
            logger.warning(f"Closed-form cofinal subsets too large ({e}); enumerating lazily")
            closed = None
        if closed is not None:
            return closed
    horizon = (policy or ProbePolicy.from_env()).horizon
    return _lazy_cofinal_sets(languages, horizon)


# ==================== Generator ====================

class CodingGenerator(CollectionGenerator):
    """
    Element-based generator whose whole state is its previous output.

    Codeword sizes roughly double every round, so runs are capped at
    `rounds_cap` inputs (SizeLimitError past it).
    """

    kind = GeneratorKind.CODING
    mode = OutputMode.ELEMENT

    def __init__(self, collection: FiniteCollection, rounds_cap: int = Defaults.CODING_ROUND_CAP,
                 policy: Optional[ProbePolicy] = None):
        super().__init__(collection, policy)
        self.rounds_cap = rounds_cap
        self.identifier = FullInformationIdentifier(collection, self.policy)
        self.codebooks = cofinal_subsets(collection, policy=self.policy)

    def codeword(self, i: int, m: int) -> int:
        """d_{i,m}: member of C_i at 0-based position m."""
        book = self.codebooks[i - 1]
        if not isinstance(book, StructuredSet) and m >= self.policy.horizon:
            raise SizeLimitError(f"Codeword position {m} needs a closed-form codebook")
        try:
            return book.nth_element(m + 1)
        except ProbeExhaustedError:
            raise SizeLimitError(f"Codeword C_{i}[{m}] lies past the probe horizon")

    def decode(self, y: int) -> Tuple[int, Tuple[int, ...], int]:
        """(codebook index, history, nonce) carried by a codeword."""
        for i, book in enumerate(self.codebooks, start=1):
            if book.contains(y):
                code, nonce = unpair(book.count_below(y))
                return i, seq_decode(code), nonce
        raise DecodeFailureError(f"{y} is not a codeword")

    def initial_state(self) -> int:
        return self.codeword(1, pair(seq_encode(()), 1))

    def step(self, state: int, x: int) -> Tuple[GeneratorOutput, int]:
        _, history, _ = self.decode(state)
        history = history + (x,)
        if len(history) > self.rounds_cap:
            raise SizeLimitError(f"Coding generator is capped at {self.rounds_cap} rounds")
        i = self.identifier.index_for(history)
        code = seq_encode(history)
        for nonce in count(0):
            y = self.codeword(i, pair(code, nonce))
            if y > state and y > x:
                return GeneratorOutput.of_element(y), y

    def describe(self) -> str:
        return f"CodingGenerator({self.collection.name})"
