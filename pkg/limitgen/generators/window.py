"""
Window generators: the output depends on the W most recent inputs.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple, Type

from limitgen.config import ProbePolicy
from limitgen.exceptions import DuplicateInWindowError
from limitgen.generators.base import (
    CollectionGenerator,
    GeneratorKind,
    GeneratorOutput,
    OutputMode,
    infinite_or_universe,
)
from limitgen.generators.memoryless import canonical_intersection_step
from limitgen.languages import Collection
from limitgen.sets import SetExpr, universe

logger = logging.getLogger(__name__)


# ==================== Strategies ====================

class WindowRule(Enum):
    """How a window of inputs is turned into an output set."""
    LAST_ELEMENT = "last"            # canonical intersection of the newest input
    INTERSECT_WINDOW = "intersect"   # intersect languages containing the whole window

    @classmethod
    def from_string(cls, value: str) -> "WindowRule":
        mapping = {
            "last": cls.LAST_ELEMENT,
            "last_element": cls.LAST_ELEMENT,
            "intersect": cls.INTERSECT_WINDOW,
            "intersect_window": cls.INTERSECT_WINDOW,
            "window": cls.INTERSECT_WINDOW,
        }
        try:
            return mapping[value.lower()]
        except KeyError:
            raise ValueError(f"Unknown window rule '{value}'. Expected one of: {', '.join(sorted(mapping))}")


class WindowStrategy(ABC):
    """Abstract base class for window strategies."""

    @abstractmethod
    def output(self, coll: Collection, entries: Sequence[int], policy: ProbePolicy) -> SetExpr:
        pass


class LastElementStrategy(WindowStrategy):
    """Ignore everything but the newest entry."""

    def output(self, coll: Collection, entries: Sequence[int], policy: ProbePolicy) -> SetExpr:
        return canonical_intersection_step(coll, entries[-1], policy)


class WindowIntersectionStrategy(WindowStrategy):
    """Intersect every language that contains the whole window; fall back to the universe."""

    def output(self, coll: Collection, entries: Sequence[int], policy: ProbePolicy) -> SetExpr:
        common = [i for i in coll.indices() if all(coll.language(i).contains(x) for x in entries)]
        if not common:
            return universe()
        return infinite_or_universe(coll.meet(common), policy)


class WindowStrategyFactory:
    """Factory for creating window strategies."""

    _strategies: Dict[WindowRule, Type[WindowStrategy]] = {
        WindowRule.LAST_ELEMENT: LastElementStrategy,
        WindowRule.INTERSECT_WINDOW: WindowIntersectionStrategy,
    }

    @classmethod
    def create(cls, rule: WindowRule) -> WindowStrategy:
        strategy_class = cls._strategies.get(rule)
        if not strategy_class:
            raise ValueError(f"No strategy for window rule: {rule}")
        return strategy_class()


# ==================== Step ====================

@dataclass(frozen=True)
class WindowState:
    entries: Tuple[int, ...]
    width: int


def window_step(
    coll: Collection,
    state: WindowState,
    x: int,
    strategy: WindowStrategy,
    policy: Optional[ProbePolicy] = None,
) -> Tuple[SetExpr, WindowState]:
    # the oldest entry of a full window is evicted before x arrives
    kept = state.entries[max(0, len(state.entries) - state.width + 1):]
    if x in kept:
        raise DuplicateInWindowError(f"{x} is already in the window {kept}")
    entries = (state.entries + (x,))[-state.width:]
    out = strategy.output(coll, entries, policy or ProbePolicy.from_env())
    return out, WindowState(entries, state.width)


class WindowGenerator(CollectionGenerator):
    """Set-based generator with a window of width W over a finite collection."""

    kind = GeneratorKind.WINDOW
    mode = OutputMode.SET

    def __init__(self, collection: Collection, width: int, rule: WindowRule = WindowRule.LAST_ELEMENT,
                 policy: Optional[ProbePolicy] = None):
        if width < 1:
            raise ValueError(f"Window width must be >= 1, got {width}")
        super().__init__(collection, policy)
        self.width = width
        self.rule = rule
        self.strategy = WindowStrategyFactory.create(rule)

    def initial_state(self) -> WindowState:
        return WindowState((), self.width)

    def step(self, state: WindowState, x: int) -> Tuple[GeneratorOutput, WindowState]:
        out, state = window_step(self.collection, state, x, self.strategy, self.policy)
        return GeneratorOutput.of_set(out), state

    def output_for_window(self, entries: Sequence[int]) -> SetExpr:
        """Output on a full window, oldest entry first."""
        if len(entries) != self.width:
            raise ValueError(f"Expected {self.width} entries, got {len(entries)}")
        return self.strategy.output(self.collection, tuple(entries), self.policy)

    def describe(self) -> str:
        return f"WindowGenerator(W={self.width}, {self.rule.value})"
