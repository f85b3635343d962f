"""
Periodic cell systems: the trivial one-cell system and residues mod m.
"""

from fractions import Fraction
from math import gcd
from typing import Any, Dict, FrozenSet, Optional, Tuple

from limitgen.cells.base import CellSystem, DensityPair
from limitgen.exceptions import OutOfRangeError


def count_congruent(lo: int, hi: int, modulus: int, residue: int) -> int:
    """Number of x in [lo, hi) with x % modulus == residue."""
    if hi <= lo:
        return 0
    first = lo + (residue - lo) % modulus
    return 0 if first >= hi else (hi - 1 - first) // modulus + 1


def crt(a1: int, m1: int, a2: int, m2: int) -> Optional[Tuple[int, int]]:
    """Solve x = a1 mod m1, x = a2 mod m2. Returns (residue, lcm), or None if inconsistent."""
    g = gcd(m1, m2)
    if (a2 - a1) % g:
        return None
    step = m2 // g
    t = 0 if step == 1 else (a2 - a1) // g * pow(m1 // g, -1, step) % step
    joint = m1 // g * m2
    return (a1 + m1 * t) % joint, joint


class TrivialSystem(CellSystem):
    """One cell holding the whole domain."""

    name = "all"

    @property
    def cell_count(self) -> int:
        return 1

    @property
    def period(self) -> Optional[int]:
        return 1

    def label(self, x: int) -> int:
        return 0

    def count_below(self, cell: int, n: int) -> int:
        return max(n, 0)

    def nth_in(self, cells: FrozenSet[int], n: int) -> int:
        if not cells:
            raise OutOfRangeError("Asked for an element of an empty union of cells")
        return n - 1

    def density(self, cell: int) -> Optional[DensityPair]:
        return Fraction(1), Fraction(1)

    def describe_cell(self, cell: int) -> str:
        return "N"

    def key(self) -> Tuple[Any, ...]:
        return ("trivial",)

    def params(self) -> Dict[str, Any]:
        return {}


class ResidueSystem(CellSystem):
    """
    Residue classes mod m. Cell r holds every x with x % m == r.

    Counting and indexing are closed form, so queries on astronomically
    large elements cost a handful of big-integer operations.
    """

    name = "residue"

    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        self.modulus = modulus

    @property
    def cell_count(self) -> int:
        return self.modulus

    @property
    def period(self) -> Optional[int]:
        return self.modulus

    def label(self, x: int) -> int:
        return x % self.modulus

    def count_below(self, cell: int, n: int) -> int:
        if n <= cell:
            return 0
        return (n - cell + self.modulus - 1) // self.modulus

    def count_cells_below(self, cells, n: int) -> int:
        if n <= 0:
            return 0
        cells = sorted(cells)
        q, r = divmod(n, self.modulus)
        return q * len(cells) + sum(1 for c in cells if c < r)

    def nth_in(self, cells: FrozenSet[int], n: int) -> int:
        if n < 1:
            raise ValueError(f"Element index must be >= 1, got {n}")
        residues = sorted(cells)
        if not residues:
            raise OutOfRangeError("Asked for an element of an empty union of cells")
        q, j = divmod(n - 1, len(residues))
        return q * self.modulus + residues[j]

    def density(self, cell: int) -> Optional[DensityPair]:
        d = Fraction(1, self.modulus)
        return d, d

    def describe_cell(self, cell: int) -> str:
        return f"{cell} mod {self.modulus}"

    def key(self) -> Tuple[Any, ...]:
        return ("residue", self.modulus)

    def params(self) -> Dict[str, Any]:
        return {"modulus": self.modulus}
