"""
Products of a residue labeling with an aperiodic cell system.

Cell r * |S| + j of ProductSystem(m, S) holds the x with x % m == r and
S.label(x) == j. Counting and finiteness are delegated to S's residue
queries, so every product cell is answered exactly.
"""

from typing import Any, Dict, Optional, Tuple

from limitgen.cells.base import CellSystem, DensityPair
from limitgen.exceptions import IncompatibleCellSystemsError


class ProductSystem(CellSystem):
    name = "product"

    def __init__(self, modulus: int, other: CellSystem):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        if not other.counts_residues:
            raise IncompatibleCellSystemsError(f"{other!r} cannot be split by residues")
        self.modulus = modulus
        self.other = other

    @property
    def cell_count(self) -> int:
        return self.modulus * self.other.cell_count

    def cell(self, residue: int, inner: int) -> int:
        return residue * self.other.cell_count + inner

    def split(self, cell: int) -> Tuple[int, int]:
        """(residue, cell of the inner system)."""
        return divmod(cell, self.other.cell_count)

    def label(self, x: int) -> int:
        return self.cell(x % self.modulus, self.other.label(x))

    def count_below(self, cell: int, n: int) -> int:
        if n <= 0:
            return 0
        residue, inner = self.split(cell)
        return self.other.count_in_residue(inner, n, self.modulus, residue)

    def cell_elements(self, cell: int) -> Optional[Tuple[int, ...]]:
        residue, inner = self.split(cell)
        return self.other.residue_elements(inner, self.modulus, residue)

    def density(self, cell: int) -> Optional[DensityPair]:
        residue, inner = self.split(cell)
        return self.other.residue_density(inner, self.modulus, residue)

    def describe_cell(self, cell: int) -> str:
        residue, inner = self.split(cell)
        return f"{self.other.describe_cell(inner)} & {residue} mod {self.modulus}"

    def key(self) -> Tuple[Any, ...]:
        return ("product", self.modulus, self.other.key())

    def params(self) -> Dict[str, Any]:
        return {"modulus": self.modulus, "other": self.other}
