"""
Base classes for generators and identifiers.

A generator is a pure step function over an explicit state: step(state, x)
returns the round's output and the next state. Nothing is mutated, so a
run can be replayed or forked from any recorded state.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, List, Optional, Tuple, Union

from limitgen.config import ProbePolicy
from limitgen.exceptions import VerdictUnknownError
from limitgen.languages import Collection, Language
from limitgen.sets import SetExpr, is_infinite, universe


# ==================== Enums ====================

class OutputMode(Enum):
    """What a generator emits each round."""
    SET = "set"            # a hypothesis set G_t
    INDEX = "index"        # a language index into the collection
    ELEMENT = "element"    # a single fresh element

    @classmethod
    def from_string(cls, value: str) -> "OutputMode":
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"Unknown output mode '{value}'. Expected one of: set, index, element")


class GeneratorKind(Enum):
    MEMORYLESS = "memoryless"
    MEMORYLESS_COUNTABLE = "memoryless_countable"
    WINDOW = "window"
    BUFFER = "buffer"
    INCREMENTAL = "incremental"
    CODING = "coding"
    FULL_INFORMATION = "full_information"
    THRESHOLD_ELEMENT = "threshold_element"


# ==================== Outputs ====================

@dataclass(frozen=True)
class GeneratorOutput:
    mode: OutputMode
    value: Union[SetExpr, int]

    @classmethod
    def of_set(cls, s: SetExpr) -> "GeneratorOutput":
        return cls(OutputMode.SET, s)

    @classmethod
    def of_index(cls, i: int) -> "GeneratorOutput":
        return cls(OutputMode.INDEX, i)

    @classmethod
    def of_element(cls, y: int) -> "GeneratorOutput":
        return cls(OutputMode.ELEMENT, y)

    def describe(self) -> str:
        if self.mode is OutputMode.SET:
            return self.value.describe()
        if self.mode is OutputMode.INDEX:
            return f"L_{self.value}"
        return str(self.value)


# ==================== Generator ====================

class Generator(ABC):
    """
    Abstract base class for every generator and identifier.

    Subclasses set `kind` and `mode` and implement initial_state() and step().
    """

    kind: GeneratorKind
    mode: OutputMode

    @abstractmethod
    def initial_state(self) -> Any:
        pass

    @abstractmethod
    def step(self, state: Any, x: int) -> Tuple[GeneratorOutput, Any]:
        """Consume x; return this round's output and the next state."""
        pass

    def hypothesis(self, index: int) -> Language:
        """Language named by an index output."""
        raise TypeError(f"{self.describe()} does not emit indices")

    def run(self, xs: Iterable[int]) -> List[GeneratorOutput]:
        state = self.initial_state()
        outputs = []
        for x in xs:
            out, state = self.step(state, x)
            outputs.append(out)
        return outputs

    def describe(self) -> str:
        return self.__class__.__name__

    def __repr__(self) -> str:
        return f"<{self.describe()}>"


def infinite_or_universe(s: SetExpr, policy: Optional[ProbePolicy] = None) -> SetExpr:
    """s when s is infinite, else the whole domain. Unknown verdicts raise."""
    verdict = is_infinite(s, policy)
    if verdict is None:
        raise VerdictUnknownError(f"Cannot decide whether {s.describe()} is finite")
    return s if verdict else universe()


class CollectionGenerator(Generator):
    """A generator that works against a fixed collection."""

    def __init__(self, collection: Collection, policy: Optional[ProbePolicy] = None):
        self.collection = collection
        self.policy = policy or ProbePolicy.from_env()

    def hypothesis(self, index: int) -> Language:
        if self.mode is not OutputMode.INDEX:
            return super().hypothesis(index)
        return self.collection.language(index)

    def describe(self) -> str:
        return f"{self.__class__.__name__}({self.collection.name})"
