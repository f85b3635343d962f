"""
Greedy buffer generator: stores at most b informative inputs.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

from limitgen.config import ProbePolicy
from limitgen.exceptions import EmptySignatureError
from limitgen.generators.base import (
    CollectionGenerator,
    GeneratorKind,
    GeneratorOutput,
    OutputMode,
    infinite_or_universe,
)
from limitgen.languages import Collection
from limitgen.sets import SetExpr

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BufferState:
    """
    Attributes:
        stored: Inputs kept so far, in insertion order.
        residual: Indices of languages containing every stored input.
        capacity: Maximum number of stored inputs.
    """
    stored: Tuple[int, ...]
    residual: FrozenSet[int]
    capacity: int


def initial_buffer_state(coll: Collection, capacity: int) -> BufferState:
    return BufferState((), frozenset(coll.indices()), capacity)


def buffer_step(
    coll: Collection,
    state: BufferState,
    x: int,
    policy: Optional[ProbePolicy] = None,
) -> Tuple[SetExpr, BufferState]:
    """
    Output the canonical intersection of x over the residual sub-collection,
    then store x if there is room and it shrinks the residual.
    """
    inside = sorted(i for i in state.residual if coll.language(i).contains(x))
    if not inside:
        raise EmptySignatureError(f"{x} lies in no residual language {sorted(state.residual)}")
    out = infinite_or_universe(coll.meet(inside), policy)

    shrunk = frozenset(inside)
    if len(state.stored) < state.capacity and shrunk < state.residual:
        logger.debug(f"Buffer stores {x}; residual {sorted(state.residual)} -> {sorted(shrunk)}")
        state = BufferState(state.stored + (x,), shrunk, state.capacity)
    return out, state


class BufferGenerator(CollectionGenerator):
    kind = GeneratorKind.BUFFER
    mode = OutputMode.SET

    def __init__(self, collection: Collection, capacity: int, policy: Optional[ProbePolicy] = None):
        if capacity < 0:
            raise ValueError(f"Buffer capacity must be >= 0, got {capacity}")
        super().__init__(collection, policy)
        self.capacity = capacity

    def initial_state(self) -> BufferState:
        return initial_buffer_state(self.collection, self.capacity)

    def step(self, state: BufferState, x: int) -> Tuple[GeneratorOutput, BufferState]:
        out, state = buffer_step(self.collection, state, x, self.policy)
        return GeneratorOutput.of_set(out), state

    def describe(self) -> str:
        return f"BufferGenerator(b={self.capacity})"
