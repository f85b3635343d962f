"""
Non-adaptive enumeration schedules.
"""

import logging
from typing import Any, Dict, Optional

from limitgen.config import Defaults
from limitgen.enumerations import (
    BadPointEnumeration,
    CanonicalEnumeration,
    EnumerationStream,
    FinitelyRepeatingEnumeration,
)
from limitgen.exceptions import ConfigError
from limitgen.languages import Language

logger = logging.getLogger(__name__)


def canonical_enumeration(k: Language) -> EnumerationStream:
    return CanonicalEnumeration(k)


def finitely_repeating_enumeration(k: Language, cap: int, seed: int = 0,
                                   coverage_factor: int = Defaults.COVERAGE_FACTOR) -> EnumerationStream:
    return FinitelyRepeatingEnumeration(k, cap, seed, coverage_factor)


def bad_point_interleaver(k: Language, b: int) -> EnumerationStream:
    """x_1, b, x_2, b, ...: b recurs forever, so the stream only has arbitrary repetition."""
    if not k.contains(b):
        raise ValueError(f"Bad point {b} is not in {k.name}")
    return BadPointEnumeration(k, b)


class StreamFactory:
    """Builds the stream named in an experiment's `stream` section."""

    @classmethod
    def create(cls, spec: Dict[str, Any], target: Language,
               fixed: Optional[EnumerationStream] = None, seed: int = 0) -> EnumerationStream:
        policy = spec.get("policy", "canonical")
        if policy == "canonical":
            return canonical_enumeration(target)
        if policy == "finitely_repeating":
            return finitely_repeating_enumeration(
                target,
                int(spec.get("cap", 3)),
                int(spec.get("seed", seed)),
                int(spec.get("coverage_factor", Defaults.COVERAGE_FACTOR)),
            )
        if policy == "bad_point":
            return bad_point_interleaver(target, int(spec.get("bad_point", target.nth_element(1))))
        if policy == "fixed":
            if fixed is None:
                raise ConfigError("Stream policy 'fixed' needs an instance with a fixed enumeration")
            return fixed
        raise ConfigError(f"Unknown stream policy: {policy!r}")
