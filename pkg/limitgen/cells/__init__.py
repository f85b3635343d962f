"""
Cell systems: finite labelings of the domain that structured sets are built on.
"""

from limitgen.cells.base import CellSystem, PositionalSystem
from limitgen.cells.periodic import ResidueSystem, TrivialSystem
from limitgen.cells.positional import (
    BlockPartitionSystem,
    FactorialBlockSystem,
    PowerRoundRobinSystem,
    zero_density_block_ends,
)
from limitgen.cells.product import ProductSystem
from limitgen.cells.refine import Refinement, refine

__all__ = [
    "CellSystem",
    "PositionalSystem",
    "TrivialSystem",
    "ResidueSystem",
    "PowerRoundRobinSystem",
    "BlockPartitionSystem",
    "FactorialBlockSystem",
    "zero_density_block_ends",
    "ProductSystem",
    "Refinement",
    "refine",
]
