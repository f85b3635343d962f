"""
Aperiodic cell systems used by the hard instances.

- PowerRoundRobinSystem: positions that are powers of two form a
  zero-density cell Z; the remaining positions are dealt round-robin to
  A_1 .. A_N.
- BlockPartitionSystem: positions are cut into blocks whose lengths grow so
  fast that every bin has lower density 0; block t goes to bin
  ((t - 1) mod m) + 1.
- FactorialBlockSystem: the set of x with (2r)! < x <= (2r+1)! for some
  r >= 1, whose natural density does not exist.
"""

from fractions import Fraction
from math import factorial, gcd
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Tuple
import logging

from limitgen.cells.base import CellSystem, DensityPair, PositionalSystem
from limitgen.cells.periodic import count_congruent, crt

logger = logging.getLogger(__name__)


# ==================== Powers of two + round robin ====================

class PowerRoundRobinSystem(PositionalSystem):
    """
    Cell 0 is Z (power-of-two positions, 1 = 2**0 included); cell i in
    1 .. N is A_i, which receives the q-th non-power position whenever
    q is congruent to i mod N.
    """

    name = "power_round_robin"
    Z = 0

    @property
    def round_robin(self) -> int:
        return self.parts - 1

    def __init__(self, round_robin: int, base=None):
        if round_robin < 1:
            raise ValueError(f"round_robin must be positive, got {round_robin}")
        super().__init__(round_robin + 1, base)

    def position_label(self, p: int) -> int:
        if p & (p - 1) == 0:
            return self.Z
        q = p - p.bit_length()
        return (q - 1) % self.round_robin + 1

    def position_count(self, cell: int, npos: int) -> int:
        if npos <= 0:
            return 0
        powers = npos.bit_length()
        if cell == self.Z:
            return powers
        rest = npos - powers
        if rest < cell:
            return 0
        return (rest - cell) // self.round_robin + 1

    def nth_in(self, cells: FrozenSet[int], n: int) -> int:
        if frozenset(cells) == {self.Z} and n >= 1:
            return self.element_at(1 << (n - 1))
        return super().nth_in(cells, n)

    def count_in_residue(self, cell: int, n: int, modulus: int, residue: int) -> int:
        if cell == self.Z:
            return sum(1 for k in range(n.bit_length() + 1) if (1 << k) - 1 < n and ((1 << k) - 1) % modulus == residue)
        # segment k holds x in [2**k, 2**(k+1) - 1); there x is in A_i iff x = i + k mod N
        total, k = 0, 1
        while (1 << k) < n:
            joint = crt((cell + k) % self.round_robin, self.round_robin, residue, modulus)
            if joint is not None:
                total += count_congruent(1 << k, min((1 << (k + 1)) - 1, n), joint[1], joint[0])
            k += 1
        return total

    def residue_elements(self, cell: int, modulus: int, residue: int) -> Optional[Tuple[int, ...]]:
        if cell != self.Z:
            # every residue mod gcd(N, modulus) recurs along the segments
            return None
        # 2**k mod modulus is periodic from k = modulus.bit_length() on
        settled = modulus.bit_length()
        if any(((1 << k) - 1) % modulus == residue for k in range(settled, settled + modulus)):
            return None
        return tuple((1 << k) - 1 for k in range(settled) if ((1 << k) - 1) % modulus == residue)

    def residue_density(self, cell: int, modulus: int, residue: int) -> Optional[DensityPair]:
        if cell == self.Z:
            return Fraction(0), Fraction(0)
        if gcd(self.round_robin, modulus) == 1:
            d = Fraction(1, self.round_robin * modulus)
            return d, d
        return None

    def density(self, cell: int) -> Optional[DensityPair]:
        if self.base is not None:
            return None
        if cell == self.Z:
            return Fraction(0), Fraction(0)
        d = Fraction(1, self.round_robin)
        return d, d

    def describe_cell(self, cell: int) -> str:
        if cell == self.Z:
            return "Z"
        if cell == self.outside_cell:
            return "outside"
        return f"A_{cell}"

    def params(self) -> Dict[str, Any]:
        return {"round_robin": self.round_robin, "base": self.base}


# ==================== Zero-density blocks ====================

def zero_density_block_ends() -> Iterator[int]:
    """
    Yield s_1, s_2, ... where s_0 = 0, l_t = t**2 * (1 + s_{t-1}) and
    s_t = s_{t-1} + l_t. Starts 1, 9, 99, 1699, ...
    """
    s, t = 0, 0
    while True:
        t += 1
        s = s + t * t * (1 + s)
        yield s


class BlockPartitionSystem(PositionalSystem):
    """
    Bins A_1 .. A_m over canonical positions. Cell i - 1 is bin A_i and
    collects the blocks B_t = (s_{t-1}, s_t] with t congruent to i mod m.
    """

    name = "zero_density_blocks"

    def __init__(self, bins: int, base=None):
        super().__init__(bins, base)
        self._ends: List[int] = [0]
        self._gen = zero_density_block_ends()

    def block_end(self, t: int) -> int:
        """s_t (s_0 = 0)."""
        while len(self._ends) <= t:
            self._ends.append(next(self._gen))
        return self._ends[t]

    def block_of(self, p: int) -> int:
        t = 1
        while self.block_end(t) < p:
            t += 1
        return t

    def bin_of_block(self, t: int) -> int:
        return (t - 1) % self.parts

    def position_label(self, p: int) -> int:
        return self.bin_of_block(self.block_of(p))

    def position_count(self, cell: int, npos: int) -> int:
        total, t = 0, 1
        while npos > 0 and self.block_end(t - 1) < npos:
            if self.bin_of_block(t) == cell:
                total += min(self.block_end(t), npos) - self.block_end(t - 1)
            t += 1
        return total

    def count_in_residue(self, cell: int, n: int, modulus: int, residue: int) -> int:
        # block t covers x in [s_{t-1}, s_t)
        total, t = 0, 1
        while self.block_end(t - 1) < n:
            if self.bin_of_block(t) == cell:
                total += count_congruent(self.block_end(t - 1), min(self.block_end(t), n), modulus, residue)
            t += 1
        return total

    def residue_elements(self, cell: int, modulus: int, residue: int) -> Optional[Tuple[int, ...]]:
        return None

    def residue_density(self, cell: int, modulus: int, residue: int) -> Optional[DensityPair]:
        upper, lower = self.density(cell)
        return upper / modulus, lower / modulus

    def density(self, cell: int) -> Optional[DensityPair]:
        if self.base is not None:
            return None
        if self.parts == 1:
            return Fraction(1), Fraction(1)
        return Fraction(1), Fraction(0)

    def describe_cell(self, cell: int) -> str:
        if cell == self.outside_cell:
            return "outside"
        return f"bin_{cell + 1}"

    def params(self) -> Dict[str, Any]:
        return {"bins": self.parts, "base": self.base}


# ==================== Alternating factorial blocks ====================

class FactorialBlockSystem(CellSystem):
    """
    Cell 1 holds every x with (2r)! < x <= (2r+1)! for some r >= 1; cell 0
    holds the rest. Both cells have upper density 1 and lower density 0.
    """

    name = "factorial_blocks"
    INSIDE = 1
    OUTSIDE = 0

    @property
    def cell_count(self) -> int:
        return 2

    @staticmethod
    def blocks() -> Iterator[Tuple[int, int]]:
        """Yield the inclusive ranges ((2r)! + 1, (2r+1)!) for r = 1, 2, ..."""
        r = 1
        while True:
            lo = factorial(2 * r)
            yield lo + 1, lo * (2 * r + 1)
            r += 1

    def label(self, x: int) -> int:
        for lo, hi in self.blocks():
            if x < lo:
                return self.OUTSIDE
            if x <= hi:
                return self.INSIDE

    def count_below(self, cell: int, n: int) -> int:
        if n <= 0:
            return 0
        inside = 0
        for lo, hi in self.blocks():
            if lo >= n:
                break
            inside += min(hi, n - 1) - lo + 1
        return inside if cell == self.INSIDE else n - inside

    @property
    def counts_residues(self) -> bool:
        return True

    def count_in_residue(self, cell: int, n: int, modulus: int, residue: int) -> int:
        inside = 0
        for lo, hi in self.blocks():
            if lo >= n:
                break
            inside += count_congruent(lo, min(hi + 1, n), modulus, residue)
        if cell == self.INSIDE:
            return inside
        return count_congruent(0, n, modulus, residue) - inside

    def residue_elements(self, cell: int, modulus: int, residue: int) -> Optional[Tuple[int, ...]]:
        return None

    def residue_density(self, cell: int, modulus: int, residue: int) -> Optional[DensityPair]:
        return Fraction(1, modulus), Fraction(0)

    def density(self, cell: int) -> Optional[DensityPair]:
        return Fraction(1), Fraction(0)

    def describe_cell(self, cell: int) -> str:
        return "factorial_inside" if cell == self.INSIDE else "factorial_outside"

    def key(self) -> Tuple[Any, ...]:
        return ("factorial_blocks",)

    def params(self) -> Dict[str, Any]:
        return {}
