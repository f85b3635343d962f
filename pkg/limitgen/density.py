"""
Upper and lower densities of a set relative to a reference language.

The density of S in K at horizon n is |S intersect K_n| / n, where K_n is
the set of the first n members of K in canonical order. Structured sets
whose cells carry declared densities get exact answers; everything else
is sampled along a horizon schedule.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from limitgen.cells import refine
from limitgen.config import Defaults
from limitgen.exceptions import IncompatibleCellSystemsError
from limitgen.sets import SetExpr, StructuredSet, intersection

logger = logging.getLogger(__name__)


# ==================== Schedules ====================

def geometric_schedule(
    min_exponent: int = Defaults.DENSITY_MIN_EXPONENT,
    max_exponent: int = Defaults.DENSITY_MAX_EXPONENT,
) -> List[int]:
    return [2 ** j for j in range(min_exponent, max_exponent + 1)]


def factorial_schedule(rounds: int) -> List[int]:
    """(2r)! and (2r+1)! for r = 1 .. rounds, where alternating blocks flip."""
    out = []
    for r in range(1, rounds + 1):
        out.extend([factorial(2 * r), factorial(2 * r + 1)])
    return out


# ==================== Estimates ====================

@dataclass(frozen=True)
class DensityEstimate:
    horizons: Tuple[int, ...]
    ratios: Tuple[Fraction, ...]
    upper_est: Fraction
    lower_est: Fraction

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "horizon": list(self.horizons),
            "ratio": [float(r) for r in self.ratios],
        })


def count_in_prefix(s: SetExpr, k: SetExpr, n: int) -> int:
    """|s intersect K_n| where K_n holds the first n members of k."""
    if n <= 0:
        return 0
    last = k.nth_element(n)
    return intersection(s, k).count_below(last + 1)


def density_ratio_series(s: SetExpr, k: SetExpr, horizons: Sequence[int]) -> List[Tuple[int, Fraction]]:
    common = intersection(s, k)
    series = []
    for n in horizons:
        last = k.nth_element(n)
        series.append((n, Fraction(common.count_below(last + 1), n)))
    return series


def empirical_density(
    s: SetExpr,
    k: SetExpr,
    schedule: Optional[Sequence[int]] = None,
    burn_in: float = Defaults.BURN_IN,
) -> DensityEstimate:
    """
    Sample density ratios along a schedule of horizons.

    The estimates are the max and min ratio over the horizons left after
    dropping the first `burn_in` fraction of the schedule (at least one
    horizon is always kept).
    """
    if not 0 <= burn_in < 1:
        raise ValueError(f"burn_in must lie in [0, 1), got {burn_in}")
    horizons = sorted(set(schedule or geometric_schedule()))
    if not horizons or horizons[0] < 1:
        raise ValueError("Density schedule needs positive horizons")
    series = density_ratio_series(s, k, horizons)
    ratios = tuple(r for _, r in series)
    tail = ratios[int(len(ratios) * burn_in):] or ratios[-1:]
    return DensityEstimate(tuple(horizons), ratios, max(tail), min(tail))


def _declared_density(s: SetExpr, k: SetExpr, upper: bool) -> Optional[Fraction]:
    if not isinstance(s, StructuredSet) or not isinstance(k, StructuredSet):
        return None
    try:
        common = intersection(s, k)
        if not isinstance(common, StructuredSet):
            return None
        if common.is_exactly_finite():
            return Fraction(0)
        ref = refine(common.system, k.system)
    except IncompatibleCellSystemsError:
        return None

    system = ref.system
    s_cells = ref.lift_left(common.infinite_cells)
    k_cells = ref.lift_right(k.infinite_cells)
    declared = {c: system.density(c) for c in s_cells | k_cells}
    if any(d is None for d in declared.values()):
        return None

    if all(d[0] == d[1] for d in declared.values()):
        total = sum(declared[c][0] for c in k_cells)
        if total == 0:
            return None
        return sum(declared[c][0] for c in s_cells) / total
    # without natural densities only a single cell inside the whole domain is exact
    if len(s_cells) == 1 and len(k_cells) == system.cell_count:
        (cell,) = s_cells
        return declared[cell][0] if upper else declared[cell][1]
    return None


def exact_upper_density(s: SetExpr, k: SetExpr) -> Optional[Fraction]:
    """Upper density of s in k from declared cell densities, or None when not exact."""
    return _declared_density(s, k, upper=True)


def exact_lower_density(s: SetExpr, k: SetExpr) -> Optional[Fraction]:
    return _declared_density(s, k, upper=False)
