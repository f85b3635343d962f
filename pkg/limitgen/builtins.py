"""
Named sets used by demos, instances and configuration files.

Structured builders return exact StructuredSets. Opaque builders return
OpaqueSets and are registered by name so they survive a JSON round trip.
"""

from itertools import count
from math import isqrt
from typing import Callable, Dict, Iterable, Iterator, Optional

from limitgen.cells import FactorialBlockSystem, ResidueSystem, TrivialSystem
from limitgen.ranges import RangeSet
from limitgen.sets import OpaqueSet, StructuredSet, universe


# ==================== Structured ====================

def naturals() -> StructuredSet:
    return universe()


def residues(modulus: int, classes: Iterable[int], name: Optional[str] = None) -> StructuredSet:
    classes = sorted({r % modulus for r in classes})
    label = name or f"{{{','.join(map(str, classes))}}} mod {modulus}"
    return StructuredSet(ResidueSystem(modulus), frozenset(classes), name=label)


def evens() -> StructuredSet:
    return residues(2, [0], name="evens")


def odds() -> StructuredSet:
    return residues(2, [1], name="odds")


def multiples(m: int) -> StructuredSet:
    return residues(m, [0], name=f"multiples of {m}")


def at_least(threshold: int) -> StructuredSet:
    """{x : x >= threshold}."""
    return StructuredSet(
        TrivialSystem(), frozenset([0]), minus=RangeSet.interval(0, threshold),
        name=f"x >= {threshold}",
    )


def factorial_blocks() -> StructuredSet:
    """{x : (2r)! < x <= (2r+1)! for some r >= 1}."""
    return StructuredSet(
        FactorialBlockSystem(), frozenset([FactorialBlockSystem.INSIDE]), name="factorial blocks",
    )


STRUCTURED_BUILTINS: Dict[str, Callable[..., StructuredSet]] = {
    "naturals": naturals,
    "evens": evens,
    "odds": odds,
    "multiples": multiples,
    "residues": residues,
    "at_least": at_least,
    "factorial_blocks": factorial_blocks,
}


# ==================== Opaque ====================

def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    return all(x % d for d in range(3, isqrt(x) + 1, 2))


def primes(horizon: Optional[int] = None) -> OpaqueSet:
    def enumerate_primes() -> Iterator[int]:
        return (x for x in count(2) if _is_prime(x))

    return OpaqueSet(_is_prime, enumerate_primes, "primes", horizon=horizon)


def squares(horizon: Optional[int] = None) -> OpaqueSet:
    def member(x: int) -> bool:
        return isqrt(x) ** 2 == x

    return OpaqueSet(member, lambda: (n * n for n in count(0)), "squares", horizon=horizon)


def opaque_multiples(m: int, horizon: Optional[int] = None) -> OpaqueSet:
    """Multiples of m, deliberately hidden behind a predicate."""
    return OpaqueSet(
        lambda x: x % m == 0, lambda: (m * n for n in count(0)),
        "opaque_multiples", params={"m": m}, horizon=horizon,
    )


def opaque_below(bound: int, horizon: Optional[int] = None) -> OpaqueSet:
    """{x : x < bound} with a declared universe bound."""
    return OpaqueSet(
        lambda x: x < bound, lambda: iter(range(bound)),
        "opaque_below", params={"bound": bound}, horizon=horizon, universe_bound=bound,
    )


OPAQUE_BUILTINS: Dict[str, Callable[..., OpaqueSet]] = {
    "primes": primes,
    "squares": squares,
    "opaque_multiples": opaque_multiples,
    "opaque_below": opaque_below,
}


def opaque_builtin(name: str, params: Optional[dict] = None) -> OpaqueSet:
    if name not in OPAQUE_BUILTINS:
        raise KeyError(f"Unknown opaque set '{name}'. Known: {', '.join(sorted(OPAQUE_BUILTINS))}")
    return OPAQUE_BUILTINS[name](**(params or {}))
