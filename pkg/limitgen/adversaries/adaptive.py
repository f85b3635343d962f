"""
Adaptive adversaries.

Each adversary queries a generator as a black box, picks a target and
builds an enumeration on which the generator keeps failing. The streams
mark the rounds planted to make the generator fail, so a harness can
check that exactly those rounds are invalid.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, islice
from math import comb
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

from limitgen.adversaries.instances import HardInstance, index_pair_instance
from limitgen.cells import BlockPartitionSystem
from limitgen.config import Defaults, ProbePolicy
from limitgen.enumerations import EnumerationStream, RepetitionPolicy
from limitgen.exceptions import CaseUndeterminedError, ProbeExhaustedError
from limitgen.generators.base import Generator
from limitgen.languages import Language
from limitgen.sets import SetExpr, StructuredSet, intersection, is_subset

logger = logging.getLogger(__name__)

Rule = Callable[[int], int]
Event = Tuple[int, bool]


def as_rule(g: Union[Generator, Rule]) -> Rule:
    """A memoryless generator (or plain callable) as a function of the current input."""
    if isinstance(g, Generator):
        def rule(x: int) -> int:
            out, _ = g.step(g.initial_state(), x)
            return out.value
        return rule
    return g


class AdaptiveEnumeration(EnumerationStream):
    """
    A stream replayed from an event schedule of (element, planted) pairs.

    Attributes:
        label: Short name of the construction.
        case: Which construction the adversary settled on, if it chose one.
    """

    def __init__(self, target: Language, events: Callable[[], Iterator[Event]],
                 policy: RepetitionPolicy, deadline: Callable[[int], int],
                 label: str, case: Optional[str] = None, repetition_cap: Optional[int] = None):
        super().__init__(target, policy, repetition_cap=repetition_cap)
        self._events = events
        self._deadline = deadline
        self.label = label
        self.case = case

    def events(self) -> Iterator[Event]:
        return self._events()

    def iterate(self) -> Iterator[int]:
        return (x for x, _ in self.events())

    def deadline(self, n: int) -> int:
        return self._deadline(n)

    def planted_rounds(self, rounds: int) -> List[int]:
        """1-based rounds, among the first `rounds`, planted to make the generator fail."""
        return [t for t, (_, planted) in enumerate(islice(self.events(), rounds), start=1) if planted]

    def describe(self) -> str:
        case = f", case={self.case}" if self.case else ""
        return f"{self.label}({self.target.name}{case})"


def _members_where(k: Language, keep: Callable[[int], bool], horizon: int) -> Iterator[int]:
    for x in k.iter_members():
        if x >= horizon:
            raise ProbeExhaustedError(f"No further witnesses in {k.name} below {horizon}")
        if keep(x):
            yield x


def _interleave(first: Sequence[int], planted: Iterator[int], fill: Iterator[int],
                lead: Optional[Callable[[int], int]] = None) -> Iterator[Event]:
    for x in first:
        yield x, False
    for a in planted:
        if lead is not None:
            yield lead(a), False
        yield a, True
        yield next(fill), False


# ==================== Element-based memoryless generators ====================

class ElementCase(Enum):
    BAD_SET = "bad_set"                  # infinitely many x with g(x) outside K or g(x) = x
    INFINITE_FIBER = "infinite_fiber"    # infinitely many x mapped to one y in K
    INFINITE_IMAGE = "infinite_image"    # infinitely many values, each hit finitely often


@dataclass(frozen=True)
class ElementClassification:
    case: ElementCase
    bad_count: int
    fiber_point: Optional[int]
    fiber_size: int
    image_size: int


def classify_element_rule(rule: Rule, k: Language, probe: int = Defaults.ADVERSARY_PROBE,
                          threshold: int = Defaults.WITNESS_COUNT) -> ElementClassification:
    """
    Sort a memoryless element rule into one of the three failure cases by
    probing its first `probe` inputs from k. A case counts as certified once
    `threshold` witnesses turn up.
    """
    bad = 0
    fibers: Counter = Counter()
    for x in k.take(probe):
        y = rule(x)
        if y == x or not k.contains(y):
            bad += 1
        else:
            fibers[y] += 1
    point, size = fibers.most_common(1)[0] if fibers else (None, 0)
    image = len(fibers)
    logger.debug(f"Element rule on {k.name}: bad={bad}, largest fiber {size} at {point}, image {image}")
    if bad >= threshold:
        case = ElementCase.BAD_SET
    elif size >= threshold:
        case = ElementCase.INFINITE_FIBER
    elif image >= threshold:
        case = ElementCase.INFINITE_IMAGE
    else:
        raise CaseUndeterminedError(
            f"Probing {probe} inputs of {k.name} certifies no case "
            f"(bad={bad}, fiber={size}, image={image}, threshold={threshold})"
        )
    return ElementClassification(case, bad, point, size, image)


def element_memoryless_adversary(g: Union[Generator, Rule], k: Language,
                                 probe: int = Defaults.ADVERSARY_PROBE,
                                 policy: Optional[ProbePolicy] = None) -> AdaptiveEnumeration:
    """
    Finitely repeating enumeration of k on which a memoryless element
    generator fails infinitely often:

    - bad set: b_1, z_1, b_2, z_2, ... with every b_i bad;
    - infinite fiber over y: y, a_1, z_1, a_2, z_2, ... with g(a_i) = y;
    - infinite image: g(a_1), a_1, z_1, g(a_2), a_2, z_2, ...

    The z_i run through k in canonical order; a_i and b_i rounds are planted.
    """
    policy = policy or ProbePolicy.from_env()
    rule = as_rule(g)
    found = classify_element_rule(rule, k, probe, policy.witness_count)
    horizon = policy.horizon

    def is_bad(x: int) -> bool:
        y = rule(x)
        return y == x or not k.contains(y)

    if found.case is ElementCase.BAD_SET:
        def events() -> Iterator[Event]:
            return _interleave((), _members_where(k, is_bad, horizon), k.iter_members())

        def deadline(n: int) -> int:
            return 2 * n
    elif found.case is ElementCase.INFINITE_FIBER:
        y = found.fiber_point

        def events() -> Iterator[Event]:
            fiber = _members_where(k, lambda x: x != y and rule(x) == y, horizon)
            return _interleave((y,), fiber, k.iter_members())

        def deadline(n: int) -> int:
            return 2 * n + 1
    else:
        def events() -> Iterator[Event]:
            good = _members_where(k, lambda x: not is_bad(x), horizon)
            return _interleave((), good, k.iter_members(), lead=rule)

        def deadline(n: int) -> int:
            return 3 * n

    logger.info(f"Element adversary on {k.name}: case {found.case.value}")
    return AdaptiveEnumeration(
        k, events, RepetitionPolicy.FINITELY_REPEATING, deadline,
        label="element-adversary", case=found.case.value,
    )


# ==================== Index-based memoryless generators ====================

def index_pair_adversary(g: Union[Generator, Rule], instance: Optional[HardInstance] = None,
                         probe: int = Defaults.ADVERSARY_PROBE,
                         policy: Optional[ProbePolicy] = None) -> AdaptiveEnumeration:
    """
    Against an index rule on {L_1, L_2} with infinite shared part C: colour C
    by the rule's answer, take a colour j that keeps recurring, target the
    other language and interleave points of C coloured j with a canonical
    enumeration of the target. Every planted round answers the wrong index.
    """
    instance = instance or index_pair_instance()
    policy = policy or ProbePolicy.from_env()
    rule = as_rule(g)
    coll = instance.collection
    if len(coll) != 2:
        raise ValueError(f"index_pair_adversary needs two languages, got {len(coll)}")
    shared = intersection(coll.language(1).expr, coll.language(2).expr)
    sample = shared.take(probe)
    late = Counter(rule(x) for x in sample[len(sample) // 2:])
    colour = 1 if late[1] >= late[2] else 2
    target = coll.language(3 - colour)
    logger.info(f"Index adversary: rule answers L_{colour} on {late[colour]} late shared points; target {target.name}")

    def events() -> Iterator[Event]:
        for_colour = _members_where(Language(shared, "C"), lambda x: rule(x) == colour, policy.horizon)
        return _interleave((), for_colour, target.iter_members())

    return AdaptiveEnumeration(
        target, events, RepetitionPolicy.FINITELY_REPEATING, lambda n: 2 * n,
        label="index-pair-adversary", case=f"colour_{colour}",
    )


# ==================== Sliding-window generators ====================

@dataclass(frozen=True)
class WindowSafe:
    """
    No window of fresh elements drawn from `examined` makes the generator
    leave the target, within `budget` candidate windows at stage `stage`.
    """
    stage: int
    examined: Tuple[int, ...]
    budget: int


class StagedWindowEnumeration(AdaptiveEnumeration):
    """
    Stage s emits the least member not yet emitted, then a window-sized
    tuple of fresh members on which the generator's output is not contained
    in the target. Once no such tuple turns up within the budget the stream
    records a WindowSafe outcome and finishes canonically.
    """

    def __init__(self, g, target: Language, width: int, budget: int, policy: ProbePolicy):
        self.generator = g
        self.width = width
        self.budget = budget
        self.probe_policy = policy
        self.safe: Optional[WindowSafe] = None
        super().__init__(
            target, self._stages, RepetitionPolicy.REPETITION_FREE,
            lambda n: n * (width + 1), label=f"window-staged-W{width}", repetition_cap=1,
        )

    def _pool_size(self) -> int:
        m = self.width
        while comb(m, self.width) < self.budget:
            m += 1
        return m

    def _bad_tuple(self, pool: Sequence[int]) -> Optional[Tuple[int, ...]]:
        for entries in islice(combinations(pool, self.width), self.budget):
            out = self.generator.output_for_window(entries)
            verdict = is_subset(out, self.target.expr, self.probe_policy)
            if verdict.fails:
                return entries
            if verdict.unknown:
                logger.warning(f"Containment of window output for {entries} is Unknown; skipped")
        return None

    def _stages(self) -> Iterator[Event]:
        emitted = set()
        canonical = self.target.iter_members()
        fresh = self.target.iter_members()
        pool_size = self._pool_size()
        self.safe = None
        stage = 0
        while True:
            stage += 1
            u = next(x for x in canonical if x not in emitted)
            emitted.add(u)
            yield u, False
            if self.safe is not None:
                continue
            pool = list(islice((x for x in fresh if x not in emitted), pool_size))
            bad = self._bad_tuple(pool)
            if bad is None:
                self.safe = WindowSafe(stage, tuple(pool), self.budget)
                logger.warning(f"{self.generator!r} is window-safe on {self.target.name} at stage {stage}")
                continue
            for i, x in enumerate(bad, start=1):
                emitted.add(x)
                yield x, i == len(bad)

    def certify(self, stages: int = 1) -> Optional[WindowSafe]:
        """Run the first `stages` stages; the WindowSafe outcome if one was reached."""
        done = 0
        for _, planted in self.events():
            if self.safe is not None:
                return self.safe
            if planted:
                done += 1
                if done >= stages:
                    return None
        return self.safe


def window_staged_adversary(g, target: Language, width: int,
                            budget: int = Defaults.WINDOW_STAGE_BUDGET,
                            policy: Optional[ProbePolicy] = None) -> StagedWindowEnumeration:
    """Staged repetition-free enumeration against a window-`width` generator exposing output_for_window()."""
    if width < 1:
        raise ValueError(f"Window width must be >= 1, got {width}")
    return StagedWindowEnumeration(g, target, width, budget, policy or ProbePolicy.from_env())


# ==================== Zero lower density ====================

@dataclass(frozen=True)
class CheckpointRow:
    t: int
    count: int
    end: int
    bound: Fraction
    applies: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count, self.end)

    @property
    def holds(self) -> bool:
        return not self.applies or self.ratio <= self.bound


@dataclass(frozen=True)
class PartitionBound:
    """Checkpoint ratios of the bin that contains a generator output."""
    bin_index: int
    rows: Tuple[CheckpointRow, ...]

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)

    def ratio_at(self, t: int) -> Fraction:
        return next(row.ratio for row in self.rows if row.t == t)


def checkpoint_rows(bin_set: StructuredSet, checkpoints: int = 8) -> List[CheckpointRow]:
    """
    |A_i in the first s_t positions| / s_t for t = 1 .. checkpoints. When
    block t does not belong to A_i the ratio is at most 1 / (1 + t**2).
    """
    system = bin_set.system
    if not isinstance(system, BlockPartitionSystem) or len(bin_set.cells) != 1:
        raise TypeError(f"{bin_set.describe()} is not a single zero-density bin")
    (cell,) = bin_set.cells
    rows = []
    for t in range(1, checkpoints + 1):
        end = system.block_end(t)
        count = bin_set.count_below(system.element_at(end) + 1)
        rows.append(CheckpointRow(t, count, end, Fraction(1, 1 + t * t), system.bin_of_block(t) != cell))
    return rows


def partition_lower_density_bound(output: SetExpr, bins: Sequence[StructuredSet],
                                  checkpoints: int = 8,
                                  policy: Optional[ProbePolicy] = None) -> Optional[PartitionBound]:
    """
    Checkpoint table of the bin containing `output`, which bounds the
    output's own counts from above; None when the output is not inside a
    single bin.
    """
    for i, bin_set in enumerate(bins, start=1):
        if is_subset(output, bin_set, policy).holds:
            return PartitionBound(i, tuple(checkpoint_rows(bin_set, checkpoints)))
    return None
