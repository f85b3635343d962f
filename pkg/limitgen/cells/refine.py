"""
Common refinements of cell systems.
"""

import logging
from dataclasses import dataclass
from math import lcm
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from limitgen.cells.base import CellSystem
from limitgen.cells.periodic import ResidueSystem, TrivialSystem
from limitgen.cells.product import ProductSystem
from limitgen.config import Defaults
from limitgen.exceptions import IncompatibleCellSystemsError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Refinement:
    """A system refining two others, with the cell maps from each into it."""
    system: CellSystem
    left: Dict[int, FrozenSet[int]]
    right: Dict[int, FrozenSet[int]]

    def lift_left(self, cells: Iterable[int]) -> FrozenSet[int]:
        return frozenset().union(*(self.left[c] for c in cells))

    def lift_right(self, cells: Iterable[int]) -> FrozenSet[int]:
        return frozenset().union(*(self.right[c] for c in cells))


def _identity(system: CellSystem) -> Dict[int, FrozenSet[int]]:
    return {c: frozenset([c]) for c in range(system.cell_count)}


def _collapse(system: CellSystem) -> Dict[int, FrozenSet[int]]:
    return {0: frozenset(range(system.cell_count))}


def _view(system: CellSystem) -> Optional[Tuple[int, Optional[CellSystem]]]:
    """(modulus, aperiodic factor) describing a system, or None if it cannot take part in a product."""
    if isinstance(system, TrivialSystem):
        return 1, None
    if isinstance(system, ResidueSystem):
        return system.modulus, None
    if isinstance(system, ProductSystem):
        return system.modulus, system.other
    if system.counts_residues:
        return 1, system
    return None


def _project(system: CellSystem, residue: int, inner: int) -> int:
    """Cell of `system` that contains joint cell (residue, inner)."""
    if isinstance(system, TrivialSystem):
        return 0
    if isinstance(system, ResidueSystem):
        return residue % system.modulus
    if isinstance(system, ProductSystem):
        return system.cell(residue % system.modulus, inner)
    return inner


def refine(a: CellSystem, b: CellSystem, budget: int = Defaults.CELL_BUDGET) -> Refinement:
    """
    Find a system whose cells refine both `a` and `b`.

    Identical systems refine themselves and the trivial system is refined by
    anything. Otherwise each side is read as residues mod m times at most
    one aperiodic system; the joint labeling uses residues mod lcm and the
    shared aperiodic factor. Two different aperiodic factors, positional
    systems over a base set, or more than `budget` cells raise
    IncompatibleCellSystemsError.
    """
    if a == b:
        return Refinement(a, _identity(a), _identity(a))
    if isinstance(a, TrivialSystem):
        return Refinement(b, _collapse(b), _identity(b))
    if isinstance(b, TrivialSystem):
        return Refinement(a, _identity(a), _collapse(a))

    va, vb = _view(a), _view(b)
    if va is None or vb is None:
        raise IncompatibleCellSystemsError(f"No common refinement of {a!r} and {b!r}")
    (ma, oa), (mb, ob) = va, vb
    if oa is not None and ob is not None and oa != ob:
        raise IncompatibleCellSystemsError(f"{a!r} and {b!r} have different aperiodic factors")
    other = oa if oa is not None else ob
    m = lcm(ma, mb)
    inner_count = 1 if other is None else other.cell_count
    if m * inner_count > budget:
        raise IncompatibleCellSystemsError(
            f"Refining {a!r} and {b!r} needs {m * inner_count} cells (budget {budget})"
        )

    if other is None:
        joint: CellSystem = ResidueSystem(m)
    elif m == 1:
        joint = other
    else:
        joint = ProductSystem(m, other)
    left: Dict[int, set] = {c: set() for c in range(a.cell_count)}
    right: Dict[int, set] = {c: set() for c in range(b.cell_count)}
    for residue in range(m):
        for inner in range(inner_count):
            cell = residue * inner_count + inner
            left[_project(a, residue, inner)].add(cell)
            right[_project(b, residue, inner)].add(cell)
    logger.debug(f"Refined {a!r} and {b!r} to {joint!r} ({joint.cell_count} cells)")
    return Refinement(
        joint,
        {c: frozenset(v) for c, v in left.items()},
        {c: frozenset(v) for c, v in right.items()},
    )
