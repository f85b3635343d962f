"""
Single-example classification of finite collections.

A finite collection can be generated from one example under arbitrary
repetition exactly when every I_x (the intersection of the languages
containing x) is infinite. Structured collections are decided exactly by
checking one representative per cell of a common refinement plus every
correction point; anything else is probed up to the horizon.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice
from typing import Iterable, List, Optional

from limitgen.cells import CellSystem, refine
from limitgen.config import Defaults, ProbePolicy
from limitgen.exceptions import IncompatibleCellSystemsError, ProbeExhaustedError
from limitgen.generators.memoryless import default_bijection
from limitgen.languages import Collection, FiniteCollection, signature_intersection
from limitgen.sets import StructuredSet, finiteness, intersect_all, is_infinite, is_subset

logger = logging.getLogger(__name__)


class Classification(Enum):
    GENERABLE = "generable_under_arbitrary_repetition"
    COUNTEREXAMPLE = "counterexample"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClassificationResult:
    """
    Attributes:
        verdict: The classification.
        witness: Least x whose I_x is finite (counterexamples only).
        checked: Number of elements whose I_x was examined.
        exact: Whether the verdict covers the whole domain.
    """
    verdict: Classification
    witness: Optional[int] = None
    checked: int = 0
    exact: bool = False

    def describe(self) -> str:
        if self.verdict is Classification.COUNTEREXAMPLE:
            return f"Counterexample({self.witness})"
        if self.verdict is Classification.GENERABLE:
            return "GenerableUnderArbitraryRepetition"
        return "Unknown"


def _common_system(languages: Iterable[StructuredSet]) -> Optional[CellSystem]:
    system = None
    try:
        for lang in languages:
            system = lang.system if system is None else refine(system, lang.system).system
    except IncompatibleCellSystemsError as e:
        logger.debug(f"No common refinement for exact classification: {e}")
        return None
    return system


def _representatives(system: CellSystem, corrections: set) -> List[int]:
    reps = sorted(corrections)
    for c in range(system.cell_count):
        cell = StructuredSet(system, frozenset([c]))
        rep = next((x for x in islice(cell.iter_members(), len(corrections) + 1) if x not in corrections), None)
        if rep is not None:
            reps.append(rep)
    return sorted(set(reps))


def _failing(coll: FiniteCollection, x: int, policy: ProbePolicy) -> Optional[bool]:
    if not any(lang.contains(x) for lang in coll):
        return False
    verdict = is_infinite(signature_intersection(coll, x), policy)
    return None if verdict is None else not verdict


def classify_single_example(coll: FiniteCollection, policy: Optional[ProbePolicy] = None,
                            probe: int = Defaults.ADVERSARY_PROBE) -> ClassificationResult:
    """
    GENERABLE when every I_x is infinite, COUNTEREXAMPLE with the least x
    whose I_x is finite, UNKNOWN when neither can be certified.
    """
    policy = policy or ProbePolicy.from_env()
    exprs = [lang.expr for lang in coll]

    if all(isinstance(e, StructuredSet) for e in exprs):
        system = _common_system(exprs)
        if system is not None:
            corrections = set()
            for e in exprs:
                corrections.update(e.plus)
                corrections.update(e.minus)
            reps = _representatives(system, corrections)
            failing = [x for x in reps if _failing(coll, x, policy)]
            if failing:
                return ClassificationResult(Classification.COUNTEREXAMPLE, min(failing), len(reps), exact=True)
            return ClassificationResult(Classification.GENERABLE, checked=len(reps), exact=True)

    checked = 0
    unknown = False
    try:
        for x in range(min(policy.horizon, probe)):
            checked += 1
            verdict = _failing(coll, x, policy)
            if verdict is None:
                unknown = True
            elif verdict:
                return ClassificationResult(Classification.COUNTEREXAMPLE, x, checked)
    except ProbeExhaustedError:
        unknown = True
    if unknown:
        logger.warning(f"Single-example classification of {coll.name} hit Unknown verdicts")
    return ClassificationResult(Classification.UNKNOWN, checked=checked)


# ==================== Bad sets of memoryless generators ====================

def bad_set(gen, coll: Collection, z: int, limit: int = 10 ** 4,
            policy: Optional[ProbePolicy] = None) -> List[int]:
    """B_K for K = L_z: members x of K below `limit` whose output G(x) is not inside K."""
    target = coll.language(z)
    bad = []
    for x in range(limit):
        if not target.contains(x):
            continue
        out, _ = gen.step(gen.initial_state(), x)
        if not is_subset(out.value, target.expr, policy).holds:
            bad.append(x)
    return bad


def finite_meets(coll: Collection, z: int, policy: Optional[ProbePolicy] = None) -> List[int]:
    """U_z: the union of every finite intersection of languages among L_1 .. L_z."""
    union_of_finite = set()
    for size in range(1, z + 1):
        for family in combinations(range(1, z + 1), size):
            meet = intersect_all(coll.language(i).expr for i in family)
            verdict = finiteness(meet, policy)
            if verdict.is_finite:
                union_of_finite.update(verdict.elements)
    return sorted(union_of_finite)


def bad_set_bound(coll: Collection, z: int, bijection=default_bijection,
                  limit: int = 10 ** 4, policy: Optional[ProbePolicy] = None) -> List[int]:
    """{x < limit : bijection(x) < z} together with U_z; contains B_K for the countable memoryless generator."""
    early = [x for x in range(limit) if bijection(x) < z]
    return sorted(set(early) | set(finite_meets(coll, z, policy)))
