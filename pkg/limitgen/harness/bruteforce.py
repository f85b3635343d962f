"""
Exhaustive checks of the three-language impossibility results.

bruteforce_incremental() enumerates every incremental index learner with
three states over an abstract alphabet (the distinguished symbols plus one
symbol standing for every base-set element) and simulates all of them at
once with numpy on every short distinguishing text followed by the base
set. The symbolic checks re-derive the pigeonhole behind the results
without assuming anything about how a learner treats base elements.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from limitgen.adversaries.instances import HardInstance
from limitgen.config import Defaults, ProbePolicy
from limitgen.exceptions import SizeLimitError
from limitgen.harness.games import IndexCriterion
from limitgen.languages import AlmostOrder, almost_compare
from limitgen.sets import Verdict, is_subset, set_equal

logger = logging.getLogger(__name__)

STATES = 3
TEXT_LENGTH = 3


@dataclass(frozen=True)
class Text:
    """A distinguishing text: `symbols` (as alphabet positions) then the base set forever."""
    text_id: int
    prefix: Tuple[int, ...]
    target: int

    def describe(self, alphabet: Sequence[int]) -> str:
        shown = ",".join(str(alphabet[s]) for s in self.prefix)
        return f"({shown}) + base -> L_{self.target + 1}"


@dataclass
class BruteforceReport:
    """
    Attributes:
        learner_class: Description of the enumerated class.
        candidates_total: Size of the class.
        survivors: (transition table, initial state) of every learner that
            succeeded on all texts.
        failing_text: For each candidate, the id of the first text it
            fails on (-1 for survivors).
        texts: The distinguishing texts, indexed by id.
    """
    learner_class: str
    candidates_total: int
    survivors: List[Tuple[Tuple[int, ...], int]]
    failing_text: np.ndarray
    texts: List[Text]
    criterion: IndexCriterion = IndexCriterion.EXACT
    kills_by_text: Dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.survivors


def _symbol_sets(instance: HardInstance) -> Tuple[Tuple[int, ...], List[frozenset]]:
    symbols = instance.texts.symbols
    owned = [frozenset(i for i, s in enumerate(symbols) if lang.contains(s)) for lang in instance.collection]
    return symbols, owned


def distinguishing_texts(instance: HardInstance, max_length: int = TEXT_LENGTH) -> List[Text]:
    """
    Every sequence of at most `max_length` distinguished symbols whose
    symbol set is exactly the distinguished part of one language; followed
    by the base set it is a finitely repeating text for that language.
    """
    if instance.texts is None:
        raise ValueError(f"{instance.name} carries no distinguishing texts")
    symbols, owned = _symbol_sets(instance)
    texts = []
    for length in range(1, max_length + 1):
        for prefix in product(range(len(symbols)), repeat=length):
            used = frozenset(prefix)
            targets = [r for r, own in enumerate(owned) if own == used]
            if len(targets) == 1:
                texts.append(Text(len(texts), prefix, targets[0]))
    return texts


def _acceptance(instance: HardInstance, criterion: IndexCriterion,
                policy: Optional[ProbePolicy]) -> np.ndarray:
    """ok[r, q]: output q counts as correct for target r."""
    coll = instance.collection
    n = len(coll)
    ok = np.zeros((n, n), dtype=bool)
    for r, q in product(range(n), repeat=2):
        target, guess = coll.language(r + 1).expr, coll.language(q + 1).expr
        if criterion is IndexCriterion.EXACT:
            ok[r, q] = r == q or set_equal(guess, target, policy) is Verdict.TRUE
        elif criterion is IndexCriterion.GENERATION:
            ok[r, q] = is_subset(guess, target, policy).holds
        else:
            ok[r, q] = almost_compare(guess, target, policy) is AlmostOrder.EQUIVALENT
    return ok


def _tables(alphabet: int) -> np.ndarray:
    """All transition tables over STATES states, shape (count, STATES * alphabet)."""
    width = STATES * alphabet
    count = STATES ** width
    codes = np.arange(count, dtype=np.int64)[:, None]
    powers = STATES ** np.arange(width, dtype=np.int64)[None, :]
    return ((codes // powers) % STATES).astype(np.int8)


def bruteforce_incremental(instance: HardInstance, uniform_on_base: bool = True,
                           criterion: IndexCriterion = IndexCriterion.EXACT,
                           policy: Optional[ProbePolicy] = None) -> BruteforceReport:
    """
    Simulate every three-state incremental learner that treats all base
    elements alike. A learner succeeds on a text when, once the base set
    takes over, every state it cycles through is an acceptable index.
    """
    if not uniform_on_base:
        raise ValueError("Only learners that treat base elements uniformly form a finite class")
    if len(instance.collection) != STATES:
        raise ValueError(f"Brute force needs a three-language instance, got {len(instance.collection)}")
    symbols, _ = _symbol_sets(instance)
    alphabet = len(symbols) + 1
    base = alphabet - 1
    total = STATES ** (STATES * alphabet) * STATES
    if total > Defaults.BRUTEFORCE_MAX_CANDIDATES:
        raise SizeLimitError(f"{total} candidate learners exceed the brute-force limit")

    texts = distinguishing_texts(instance)
    ok = _acceptance(instance, criterion, policy)
    tables = _tables(alphabet)
    flat = tables.reshape(-1)
    n_tables = tables.shape[0]
    offsets = (np.arange(n_tables, dtype=np.int64) * STATES * alphabet)[:, None]
    start = np.tile(np.arange(STATES, dtype=np.int64), (n_tables, 1))

    def step(states: np.ndarray, symbol: int) -> np.ndarray:
        return flat[offsets + states * alphabet + symbol].astype(np.int64)

    failing = np.full((n_tables, STATES), -1, dtype=np.int64)
    kills: Dict[int, int] = {}
    for text in texts:
        states = start
        for symbol in text.prefix:
            states = step(states, symbol)
        for _ in range(STATES):
            states = step(states, base)
        success = np.ones_like(states, dtype=bool)
        for _ in range(STATES):
            success &= ok[text.target][states]
            states = step(states, base)
        newly = (failing < 0) & ~success
        failing[newly] = text.text_id
        kills[text.text_id] = int(newly.sum())

    survivors = [
        (tuple(int(v) for v in tables[t]), int(i0))
        for t, i0 in zip(*np.nonzero(failing < 0))
    ]
    description = (
        f"incremental index learners, {STATES} states, alphabet {list(symbols)} + base, "
        f"uniform on base, {STATES} initial states"
    )
    logger.info(f"Brute force on {instance.name}: {total} candidates, {len(survivors)} survivors")
    return BruteforceReport(description, total, survivors, failing.reshape(-1), texts, criterion, kills)


# ==================== Symbolic pigeonhole ====================

@dataclass(frozen=True)
class SymbolicCheck:
    """
    Attributes:
        forced: Pairs of prefixes that must lead to different states.
        assignments_checked: Number of state assignments examined.
        consistent: Assignments meeting every forced inequality (expected 0).
    """
    forced: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    assignments_checked: int
    consistent: int

    @property
    def passed(self) -> bool:
        return self.consistent == 0


def _target_of(instance: HardInstance, sequence: Sequence[int]) -> Optional[int]:
    _, owned = _symbol_sets(instance)
    used = frozenset(sequence)
    targets = [r for r, own in enumerate(owned) if own == used]
    return targets[0] if len(targets) == 1 else None


def _forced_pairs(instance: HardInstance, prefixes: Sequence[Tuple[int, ...]],
                  suffixes: Sequence[Tuple[int, ...]]):
    """Prefix pairs that some common suffix turns into texts for different languages."""
    forced = []
    for p, q in combinations(prefixes, 2):
        for s in suffixes:
            a, b = _target_of(instance, p + s), _target_of(instance, q + s)
            if a is not None and b is not None and a != b:
                forced.append((p, q))
                break
    return forced


def symbolic_four_prefix_check(instance: HardInstance) -> SymbolicCheck:
    """
    Pairwise-distinct states forced on the instance's named prefixes by its
    named suffixes, and the count of three-state assignments that survive.
    """
    symbols = instance.texts.symbols
    position = {s: i for i, s in enumerate(symbols)}
    prefixes = [tuple(position[s] for s in p) for p in instance.texts.prefixes.values()]
    suffixes = [tuple(position[s] for s in s_) for s_ in instance.texts.suffixes.values()]
    forced = _forced_pairs(instance, prefixes, suffixes)
    checked = consistent = 0
    for assignment in product(range(STATES), repeat=len(prefixes)):
        checked += 1
        state = dict(zip(prefixes, assignment))
        if all(state[p] != state[q] for p, q in forced):
            consistent += 1
    return SymbolicCheck(tuple(forced), checked, consistent)


def symbolic_three_language_check(instance: HardInstance, max_length: int = TEXT_LENGTH) -> SymbolicCheck:
    """
    Every three-state transition table on the distinguished symbols alone,
    checked against the rule that two prefixes sharing a state must not be
    completed by a common suffix into texts for different languages. The
    base set's behaviour never enters, so no uniformity is assumed.
    """
    symbols = instance.texts.symbols
    alphabet = len(symbols)
    sequences = [()] + [s for n in range(1, max_length + 1) for s in product(range(alphabet), repeat=n)]
    suffixes = [s for s in sequences if len(s) <= 1]
    pairs = []
    for p, q in combinations(sequences, 2):
        for s in suffixes:
            if len(p + s) > max_length or len(q + s) > max_length:
                continue
            a, b = _target_of(instance, p + s), _target_of(instance, q + s)
            if a is not None and b is not None and a != b:
                pairs.append((p, q))
                break

    checked = consistent = 0
    for table in product(range(STATES), repeat=STATES * alphabet):
        for initial in range(STATES):
            checked += 1
            state = {(): initial}
            for seq in sequences[1:]:
                state[seq] = table[state[seq[:-1]] * alphabet + seq[-1]]
            if all(state[p] != state[q] for p, q in pairs):
                consistent += 1
    logger.info(f"Symbolic check on {instance.name}: {checked} learners, {consistent} consistent")
    return SymbolicCheck(tuple(pairs), checked, consistent)
