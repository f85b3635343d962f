"""
Hard-instance builders.

Every builder returns a HardInstance: the collection, the target language,
an optional fixed enumeration, and a certificate recording the parameters
of the construction so that reports and JSON dumps can rebuild it.
"""

import logging
from dataclasses import dataclass, field
from itertools import count
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Tuple

from limitgen.builtins import evens, factorial_blocks, multiples, odds, residues
from limitgen.cells import BlockPartitionSystem, CellSystem, PowerRoundRobinSystem, ResidueSystem
from limitgen.combinatorics import SubsetMask, middle_layer
from limitgen.config import INSTANCE_KINDS
from limitgen.enumerations import EnumerationStream, RepetitionPolicy, ScheduledEnumeration
from limitgen.languages import Collection, FiniteCollection, Language, LengthThresholdCollection
from limitgen.sets import SetExpr, StructuredSet, Verdict, finite_set, intersect_all, set_equal, union, universe

logger = logging.getLogger(__name__)


# ==================== Data types ====================

@dataclass(frozen=True)
class InstanceCertificate:
    """
    Construction parameters of a hard instance.

    Attributes:
        kind: Builder name (sperner, window, lower_density, ...).
        k: Collection size.
        n: k - 1, the number of non-target languages.
        width: Number of cells A_i (the Sperner width of n for the
            antichain constructions).
        masks: Middle-layer masks S_1 .. S_N.
        system: Cell system the languages are built on.
        params: Any further builder arguments.
    """
    kind: str
    k: int
    n: int = 0
    width: int = 0
    masks: Tuple[SubsetMask, ...] = ()
    system: Optional[CellSystem] = None
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class DistinguishingTexts:
    """
    Finite prefixes and suffixes used by the three-language impossibility
    arguments. Every full text is prefix + suffix + an injective
    enumeration of `base`.
    """
    symbols: Tuple[int, ...]
    base: SetExpr
    prefixes: Dict[str, Tuple[int, ...]]
    suffixes: Dict[str, Tuple[int, ...]]


@dataclass
class HardInstance:
    name: str
    collection: Collection
    target: Language
    certificate: InstanceCertificate
    fixed_enumeration: Optional[EnumerationStream] = None
    texts: Optional[DistinguishingTexts] = None

    def cells(self) -> Dict[str, SetExpr]:
        """Named cells of the construction (A_1 .. A_N, Z), when it has any."""
        system = self.certificate.system
        if system is None:
            return {}
        return {
            system.describe_cell(c): StructuredSet(system, frozenset([c]))
            for c in range(system.cell_count)
        }

    def validate(self, horizon: int = 10 ** 4) -> List[str]:
        """Structural checks; returns a list of problems (empty when valid)."""
        problems = []
        coll = self.collection
        if coll.is_finite:
            if coll.size != self.certificate.k:
                problems.append(f"collection has {coll.size} languages, expected {self.certificate.k}")
            if not any(lang is self.target for lang in coll):
                problems.append(f"target {self.target.name} is not in the collection")

        system = self.certificate.system
        if system is not None:
            for n in (1, 10, 100, horizon):
                total = sum(system.count_below(c, n) for c in range(system.cell_count))
                if total != n:
                    problems.append(f"cells of {system!r} count {total} elements below {n}")

        if self.fixed_enumeration is not None:
            stream = self.fixed_enumeration
            probe = min(horizon, 40)
            emitted = stream.take(stream.deadline(probe))
            seen = set(emitted)
            if len(seen) != len(emitted):
                problems.append("fixed enumeration repeats an element")
            if any(not self.target.contains(x) for x in emitted):
                problems.append("fixed enumeration leaves the target")
            missing = [x for x in self.target.take(probe) if x not in seen]
            if missing:
                problems.append(f"fixed enumeration misses {missing[:5]} by its deadline")
        return problems


def _cells(system: CellSystem, cells, name: str) -> StructuredSet:
    return StructuredSet(system, frozenset(cells), name=name)


def _antichain_masks(k: int) -> Tuple[int, List[SubsetMask]]:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    n = k - 1
    return n, middle_layer(n)


# ==================== Sperner (memoryless) ====================

def sperner_hard_instance(k: int) -> HardInstance:
    """
    K = N split round-robin into N = C(k-1, floor((k-1)/2)) cells: the m-th
    element (1-based) lands in A_i with i = m mod N. L_j is the union of the
    A_i whose middle-layer mask S_i contains j.

    For k = 2 the middle layer of [1] is the empty set, so L_1 = K minus {0}.
    """
    n, masks = _antichain_masks(k)
    width = len(masks)
    system = ResidueSystem(width)
    target = Language(universe(), "K")
    languages = [target]
    for j in range(1, n + 1):
        cells = [i - 1 for i, mask in enumerate(masks, start=1) if j in mask]
        if cells:
            expr = _cells(system, cells, f"L_{j}")
        else:
            expr = StructuredSet.build(system, range(width), minus=[0], name=f"L_{j}")
        languages.append(Language(expr, f"L_{j}"))
    cert = InstanceCertificate("sperner", k, n, width, tuple(masks), system)
    logger.debug(f"Sperner instance k={k}: N={width}, masks {[str(m) for m in masks]}")
    return HardInstance(f"sperner-k{k}", FiniteCollection(languages, f"sperner-k{k}"), target, cert)


def _meet_of(instance: HardInstance, indices) -> SetExpr:
    coll = instance.collection
    return intersect_all([instance.target.expr] + [coll.language(j + 1).expr for j in indices])


def expected_meets(instance: HardInstance) -> List[Tuple[Tuple[int, ...], FrozenSet[int]]]:
    """
    (language indices j, cells that K and those L_j should meet in) for an
    antichain instance: A_i for the Sperner construction, A_i + Z for the
    window construction, plus Z alone for all of L_1 .. L_n there.
    """
    cert = instance.certificate
    if cert.kind == "sperner":
        return [(mask.members, frozenset([i - 1])) for i, mask in enumerate(cert.masks, start=1)]
    if cert.kind == "window":
        zero = PowerRoundRobinSystem.Z
        rows = [(mask.members, frozenset([zero, i])) for i, mask in enumerate(cert.masks, start=1)]
        rows.append((tuple(range(1, cert.n + 1)), frozenset([zero])))
        return rows
    raise ValueError(f"{instance.name} is not an antichain instance")


def antichain_reduction_holds(instance: HardInstance) -> bool:
    """Every meet listed by expected_meets() equals its cells exactly."""
    system = instance.certificate.system
    for indices, cells in expected_meets(instance):
        if set_equal(_meet_of(instance, indices), _cells(system, cells, "expected")) is not Verdict.TRUE:
            logger.info(f"Meet of {indices} in {instance.name} is not {sorted(cells)}")
            return False
    return True


# ==================== Sliding window ====================

def _window_schedule(system: PowerRoundRobinSystem) -> Iterator[int]:
    width = system.round_robin
    blocks = [_cells(system, [i], f"A_{i}") for i in range(1, width + 1)]
    zero = _cells(system, [PowerRoundRobinSystem.Z], "Z")
    next_zero = 1
    for r in count(1):
        for block in blocks:
            yield block.nth_element(r)
            for _ in range(r):
                yield zero.nth_element(next_zero)
                next_zero += 1


def _window_deadline(width: int):
    # By the end of stage r, r members of every A_i and N r (r + 1) / 2 members
    # of Z have appeared; those cover the first r canonical positions.
    def deadline(n: int) -> int:
        return width * n * (n + 3) // 2
    return deadline


def window_hard_instance(k: int) -> HardInstance:
    """
    K = N with power-of-two positions collected in Z and the remaining
    positions dealt round-robin to A_1 .. A_N. L_j = Z plus the A_i with j
    in S_i. The fixed enumeration runs in stages r = 1, 2, ...: a_1^(r),
    then r fresh Z points, a_2^(r), r fresh Z points, and so on. Nothing
    depends on the window width.
    """
    n, masks = _antichain_masks(k)
    width = len(masks)
    system = PowerRoundRobinSystem(width)
    target = Language(universe(), "K")
    languages = [target]
    for j in range(1, n + 1):
        cells = [PowerRoundRobinSystem.Z] + [i for i, mask in enumerate(masks, start=1) if j in mask]
        languages.append(Language(_cells(system, cells, f"L_{j}"), f"L_{j}"))
    stream = ScheduledEnumeration(
        target,
        lambda: _window_schedule(system),
        RepetitionPolicy.REPETITION_FREE,
        _window_deadline(width),
        label=f"window-stages-k{k}",
        repetition_cap=1,
    )
    cert = InstanceCertificate("window", k, n, width, tuple(masks), system)
    return HardInstance(f"window-k{k}", FiniteCollection(languages, f"window-k{k}"), target, cert, stream)


# ==================== Zero lower density ====================

def zero_density_partition(k: SetExpr, m: int) -> List[StructuredSet]:
    """
    Split k into m bins of lower density 0: canonical positions are cut into
    blocks B_t of length t**2 (1 + s_{t-1}) and bin A_i collects the blocks
    with t = i mod m.
    """
    if m < 2:
        raise ValueError(f"A partition needs m >= 2 bins, got {m}")
    base = None
    if not (isinstance(k, StructuredSet) and set_equal(k, universe()) is Verdict.TRUE):
        if not isinstance(k, StructuredSet):
            raise TypeError("zero_density_partition needs a structured base language")
        base = k
    system = BlockPartitionSystem(m, base)
    return [_cells(system, [i], f"A_{i + 1}") for i in range(m)]


def lower_density_instance(k: int) -> HardInstance:
    """{K, A_1, ..., A_{k-1}} with K = N and the A_i its zero-lower-density bins."""
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    target = Language(universe(), "K")
    bins = zero_density_partition(target.expr, k - 1)
    languages = [target] + [Language(b, b.name) for b in bins]
    system = bins[0].system
    cert = InstanceCertificate("lower_density", k, k - 1, k - 1, (), system)
    return HardInstance(f"lower-density-k{k}", FiniteCollection(languages, f"lower-density-k{k}"), target, cert)


# ==================== Two-language index instance ====================

def index_pair_instance() -> HardInstance:
    """L_1 = {0, 1 mod 4} and L_2 = {0, 2 mod 4}; they share C = {0 mod 4}."""
    l1 = Language(residues(4, [0, 1], name="L_1"), "L_1")
    l2 = Language(residues(4, [0, 2], name="L_2"), "L_2")
    cert = InstanceCertificate("index_pair", 2, 1, 0, (), ResidueSystem(4), {"shared": multiples(4)})
    return HardInstance("index-pair", FiniteCollection([l1, l2], "index-pair"), l1, cert)


# ==================== Three-language counterexamples ====================

def identification_counterexample() -> HardInstance:
    """
    C = {3n}; the collection {C + {1}, C + {2}, C + {1, 2}} defeats every
    incremental identifier. The distinguishing prefixes are (), (1), (2),
    (1, 2); the suffixes are T_C, 2 T_C and 1 T_C.
    """
    system = ResidueSystem(3)
    base = _cells(system, [0], "C")
    languages = [
        Language(StructuredSet.build(system, [0], plus=extra, name=name), name)
        for name, extra in (("C+{1}", [1]), ("C+{2}", [2]), ("C+{1,2}", [1, 2]))
    ]
    texts = DistinguishingTexts(
        symbols=(1, 2),
        base=base,
        prefixes={"e": (), "1": (1,), "2": (2,), "12": (1, 2)},
        suffixes={"T": (), "2T": (2,), "1T": (1,)},
    )
    cert = InstanceCertificate("identification", 3, params={"base": "3n"})
    coll = FiniteCollection(languages, "identification-counterexample")
    return HardInstance("identification-counterexample", coll, languages[0], cert, texts=texts)


def generation_counterexample(a: int = 1, b: int = 2, c: int = 4, base: Optional[SetExpr] = None) -> HardInstance:
    """
    L_1 = T + {a, b}, L_2 = T + {a, c}, L_3 = T + {b, c}: pairwise
    incomparable, so no incremental index-based generator succeeds.
    T defaults to {3n : n >= 1}.
    """
    if len({a, b, c}) != 3:
        raise ValueError(f"a, b, c must be distinct, got {a}, {b}, {c}")
    if base is None:
        base = StructuredSet.build(ResidueSystem(3), [0], minus=[0], name="T")
    clash = [x for x in (a, b, c) if base.contains(x)]
    if clash:
        raise ValueError(f"T must avoid a, b, c; it contains {clash}")
    languages = []
    for name, extra in (("L_1", (a, b)), ("L_2", (a, c)), ("L_3", (b, c))):
        expr = union(base, finite_set(extra))
        if isinstance(expr, StructuredSet):
            expr = expr.with_name(name)
        languages.append(Language(expr, name))
    texts = DistinguishingTexts(
        symbols=(a, b, c),
        base=base,
        prefixes={"a": (a,), "b": (b,), "c": (c,), "ab": (a, b), "ac": (a, c), "bc": (b, c)},
        suffixes={"R": (), "aR": (a,), "bR": (b,), "cR": (c,)},
    )
    cert = InstanceCertificate("generation", 3, params={"a": a, "b": b, "c": c})
    coll = FiniteCollection(languages, "generation-counterexample")
    return HardInstance("generation-counterexample", coll, languages[0], cert, texts=texts)


# ==================== Demos ====================

def alternating_factorial_blocks() -> StructuredSet:
    """{x : (2r)! < x <= (2r+1)!}: upper density 1, lower density 0."""
    return factorial_blocks()


def mixed_instance() -> HardInstance:
    """{N, evens, odds + {0}}: 0 is a single example whose intersection is finite."""
    languages = [
        Language(universe(), "N"),
        Language(evens(), "evens"),
        Language(union(odds(), finite_set([0])).with_name("odds+{0}"), "odds+{0}"),
    ]
    cert = InstanceCertificate("mixed", 3)
    return HardInstance("mixed", FiniteCollection(languages, "mixed"), languages[0], cert)


def length_threshold_instance(z: int = 1) -> HardInstance:
    """The countable collection L_l = {x : x >= l}, l >= 1, with target L_z."""
    if z < 1:
        raise ValueError(f"z must be >= 1, got {z}")
    coll = LengthThresholdCollection()
    cert = InstanceCertificate("length_threshold", 0, params={"z": z})
    return HardInstance(f"length-threshold-z{z}", coll, coll.language(z), cert)


# ==================== Registry ====================

def _with_target(instance: HardInstance, z: Optional[int]) -> HardInstance:
    if z is None:
        return instance
    instance.target = instance.collection.language(z)
    return instance


def build_instance(kind: str, k: Optional[int] = None, target: Optional[int] = None,
                   **params) -> HardInstance:
    """
    Build a named instance. `k` sizes the antichain and partition
    constructions; `target` (a 1-based language index) replaces the
    builder's default target.
    """
    sized = {"sperner": sperner_hard_instance, "window": window_hard_instance,
             "lower_density": lower_density_instance}
    if kind in sized:
        if k is None:
            raise ValueError(f"Instance kind '{kind}' needs k")
        return _with_target(sized[kind](k), target)
    if kind == "index_pair":
        return _with_target(index_pair_instance(), target)
    if kind == "identification":
        return _with_target(identification_counterexample(), target)
    if kind == "generation":
        letters = {key: int(params[key]) for key in ("a", "b", "c") if key in params}
        return _with_target(generation_counterexample(**letters), target)
    if kind == "mixed":
        return _with_target(mixed_instance(), target)
    if kind == "length_threshold":
        return length_threshold_instance(target or int(params.get("z", 1)))
    raise ValueError(f"Unknown instance kind '{kind}'. Expected one of: {', '.join(INSTANCE_KINDS)}")
