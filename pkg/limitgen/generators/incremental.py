"""
Incremental identification up to finite variation.

The collection is first put in a topological order of almost-containment
(if L_j is almost contained in L_i and not conversely, j comes first).
The identifier then keeps a single index and only ever moves forward:
it stays while inputs belong to the current language and steps to the
next one otherwise.
"""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from limitgen.config import ProbePolicy
from limitgen.exceptions import UnknownOrderError
from limitgen.generators.base import CollectionGenerator, GeneratorKind, GeneratorOutput, OutputMode
from limitgen.languages import AlmostOrder, FiniteCollection, Language, almost_compare

logger = logging.getLogger(__name__)


def topological_order(coll: FiniteCollection, policy: Optional[ProbePolicy] = None) -> List[int]:
    """
    Original indices listed so that almost-contained languages come first.
    Ties are broken by original index.
    """
    n = len(coll)
    before: Dict[int, Set[int]] = {i: set() for i in range(1, n + 1)}
    for i, j in combinations(range(1, n + 1), 2):
        order = almost_compare(coll.language(i).expr, coll.language(j).expr, policy)
        if order is AlmostOrder.UNKNOWN:
            raise UnknownOrderError(f"Cannot compare {coll.language(i).name} and {coll.language(j).name}")
        if order is AlmostOrder.PRECEDES:
            before[j].add(i)
        elif order is AlmostOrder.FOLLOWS:
            before[i].add(j)

    placed: List[int] = []
    remaining = list(range(1, n + 1))
    while remaining:
        ready = next(i for i in remaining if before[i] <= set(placed))
        placed.append(ready)
        remaining.remove(ready)
    logger.debug(f"Topological order of {coll.name}: {placed}")
    return placed


def incremental_identifier_step(ordered: Sequence[Language], index: int, x: int) -> int:
    """Next position (1-based, in topological order) after seeing x."""
    if x in ordered[index - 1]:
        return index
    return min(index + 1, len(ordered))


class IncrementalIdentifier(CollectionGenerator):
    """
    Index-based identifier whose only memory is the current position.

    Outputs are original collection indices; the state is the position in
    topological order.
    """

    kind = GeneratorKind.INCREMENTAL
    mode = OutputMode.INDEX

    def __init__(self, collection: FiniteCollection, policy: Optional[ProbePolicy] = None,
                 order: Optional[Sequence[int]] = None):
        super().__init__(collection, policy)
        self.order = list(order) if order is not None else topological_order(collection, self.policy)
        self.ordered = [collection.language(i) for i in self.order]

    def initial_state(self) -> int:
        return 1

    def step(self, state: int, x: int) -> Tuple[GeneratorOutput, int]:
        position = incremental_identifier_step(self.ordered, state, x)
        return GeneratorOutput.of_index(self.order[position - 1]), position

    def index_for(self, prefix: Sequence[int]) -> int:
        """Original index output after replaying a whole prefix."""
        position = 1
        for x in prefix:
            position = incremental_identifier_step(self.ordered, position, x)
        return self.order[position - 1]


class FullInformationIdentifier(IncrementalIdentifier):
    """
    Identifier that sees the whole prefix every round and replays the
    incremental rule over it. Produces the same outputs as the incremental
    identifier; used where a learner must be a function of the full history.
    """

    kind = GeneratorKind.FULL_INFORMATION

    def initial_state(self) -> Tuple[int, ...]:
        return ()

    def step(self, state: Tuple[int, ...], x: int) -> Tuple[GeneratorOutput, Tuple[int, ...]]:
        prefix = state + (x,)
        return GeneratorOutput.of_index(self.index_for(prefix)), prefix
