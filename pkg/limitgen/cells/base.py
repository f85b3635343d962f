"""
Abstract base classes for cell systems.

A cell system partitions the domain into finitely many labeled cells. Every
structured set is a union of cells plus finite corrections, so exact set
algebra reduces to bookkeeping on cell labels. Concrete systems answer
labeling and counting queries in closed form wherever they can.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, FrozenSet, Iterable, Optional, Tuple
import logging

from limitgen.exceptions import OutOfRangeError

if TYPE_CHECKING:
    from limitgen.sets import StructuredSet

logger = logging.getLogger(__name__)

DensityPair = Tuple[Fraction, Fraction]


class CellSystem(ABC):
    """
    Abstract base class for a finite labeling of the domain.

    Subclasses implement label(), count_below() and key(). Everything else
    has a generic implementation that concrete systems override when a
    closed form exists.
    """

    name: str = "cells"

    @property
    @abstractmethod
    def cell_count(self) -> int:
        """Number of cells, labeled 0 .. cell_count - 1."""
        pass

    @abstractmethod
    def label(self, x: int) -> int:
        """Cell containing x."""
        pass

    @abstractmethod
    def count_below(self, cell: int, n: int) -> int:
        """Number of elements of `cell` in [0, n)."""
        pass

    @abstractmethod
    def key(self) -> Tuple[Any, ...]:
        """Hashable identity; equal keys mean identical labelings."""
        pass

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """JSON-ready parameters (without the type tag)."""
        pass

    # ---- optional metadata ----

    @property
    def period(self) -> Optional[int]:
        """P such that label(x + P) == label(x) for all x, if the labeling is periodic."""
        return None

    def cell_elements(self, cell: int) -> Optional[Tuple[int, ...]]:
        """Elements of a finite cell, or None if the cell is infinite."""
        return None

    def is_infinite(self, cell: int) -> bool:
        return self.cell_elements(cell) is None

    def density(self, cell: int) -> Optional[DensityPair]:
        """Declared (upper, lower) density of a cell relative to the whole domain."""
        return None

    def describe_cell(self, cell: int) -> str:
        return f"{self.name}[{cell}]"

    # ---- residue-class queries ----

    @property
    def counts_residues(self) -> bool:
        """Whether the three queries below are implemented, so that products with residues are exact."""
        return False

    def count_in_residue(self, cell: int, n: int, modulus: int, residue: int) -> int:
        """Number of x in [0, n) with label(x) == cell and x % modulus == residue."""
        raise NotImplementedError(f"{self!r} does not count residue classes")

    def residue_elements(self, cell: int, modulus: int, residue: int) -> Optional[Tuple[int, ...]]:
        """Elements of `cell` congruent to residue mod modulus if finitely many, else None."""
        raise NotImplementedError(f"{self!r} does not count residue classes")

    def residue_density(self, cell: int, modulus: int, residue: int) -> Optional[DensityPair]:
        return None

    # ---- generic counting ----

    def count_cells_below(self, cells: Iterable[int], n: int) -> int:
        return sum(self.count_below(c, n) for c in cells)

    def nth_in(self, cells: FrozenSet[int], n: int) -> int:
        """
        n-th smallest (1-based) element of the union of `cells`.

        Generic version: exponential then binary search on count_below.
        """
        if n < 1:
            raise ValueError(f"Element index must be >= 1, got {n}")
        cells = frozenset(cells)
        if not cells:
            raise OutOfRangeError("Asked for an element of an empty union of cells")
        if all(not self.is_infinite(c) for c in cells):
            members = sorted(x for c in cells for x in self.cell_elements(c))
            if n > len(members):
                raise OutOfRangeError(f"Union of finite cells has {len(members)} elements, asked for #{n}")
            return members[n - 1]

        hi = 1
        while self.count_cells_below(cells, hi) < n:
            hi *= 2
        lo = hi // 2
        # smallest x with count_cells_below(cells, x + 1) >= n
        while lo < hi:
            mid = (lo + hi) // 2
            if self.count_cells_below(cells, mid + 1) >= n:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSystem):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.params().items() if k != "base")
        return f"{self.__class__.__name__}({params})"


def _is_whole_domain(base: Optional["StructuredSet"]) -> bool:
    return base is not None and not base.minus and len(base.cells) == base.system.cell_count


class PositionalSystem(CellSystem):
    """
    A cell system that labels elements by their canonical position in a base set.

    Positions are 1-based: the smallest member of the base set sits at
    position 1. Elements outside the base set all fall in one extra cell,
    labeled `parts`. With no base set the base is the whole domain and
    position(x) = x + 1.
    """

    def __init__(self, parts: int, base: Optional["StructuredSet"] = None):
        if parts < 1:
            raise ValueError(f"parts must be positive, got {parts}")
        self.parts = parts
        self.base = None if _is_whole_domain(base) else base

    @abstractmethod
    def position_label(self, p: int) -> int:
        """Cell of canonical position p (p >= 1)."""
        pass

    @abstractmethod
    def position_count(self, cell: int, npos: int) -> int:
        """Number of positions in 1 .. npos labeled `cell`."""
        pass

    @property
    def counts_residues(self) -> bool:
        return self.base is None

    @property
    def outside_cell(self) -> Optional[int]:
        return None if self.base is None else self.parts

    @property
    def cell_count(self) -> int:
        return self.parts if self.base is None else self.parts + 1

    def cell_elements(self, cell: int) -> Optional[Tuple[int, ...]]:
        if cell != self.outside_cell:
            return None
        if not hasattr(self, "_outside"):
            from limitgen.sets import complement

            rest = complement(self.base)
            self._outside = rest.finite_elements() if rest.is_exactly_finite() else None
        return self._outside

    def position(self, x: int) -> Optional[int]:
        if self.base is None:
            return x + 1
        if not self.base.contains(x):
            return None
        return self.base.count_below(x) + 1

    def label(self, x: int) -> int:
        p = self.position(x)
        if p is None:
            return self.parts
        return self.position_label(p)

    def count_below(self, cell: int, n: int) -> int:
        if n <= 0:
            return 0
        npos = n if self.base is None else self.base.count_below(n)
        if cell == self.outside_cell:
            return n - npos
        return self.position_count(cell, npos)

    def element_at(self, p: int) -> int:
        """Element sitting at canonical position p."""
        return p - 1 if self.base is None else self.base.nth_element(p)

    def key(self) -> Tuple[Any, ...]:
        return (self.__class__.__name__, self.parts, self.base)
