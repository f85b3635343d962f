"""
Build generators from configuration dictionaries.
"""

from typing import Any, Dict, Optional

from limitgen.config import Defaults, ProbePolicy
from limitgen.exceptions import ConfigError
from limitgen.generators.base import Generator
from limitgen.generators.buffer import BufferGenerator
from limitgen.generators.coding import CodingGenerator
from limitgen.generators.incremental import FullInformationIdentifier, IncrementalIdentifier
from limitgen.generators.memoryless import (
    CanonicalIntersectionGenerator,
    CountableMemorylessGenerator,
    ThresholdElementGenerator,
)
from limitgen.generators.window import WindowGenerator, WindowRule
from limitgen.languages import Collection


class GeneratorFactory:
    """Factory for creating generators by kind name."""

    @classmethod
    def create(cls, spec: Dict[str, Any], collection: Collection,
               policy: Optional[ProbePolicy] = None) -> Generator:
        kind = spec.get("kind")
        if kind == "canonical":
            return CanonicalIntersectionGenerator(collection, policy)
        if kind == "memoryless_countable":
            return CountableMemorylessGenerator(collection, policy=policy)
        if kind == "window":
            rule = WindowRule.from_string(spec.get("strategy", "last"))
            return WindowGenerator(collection, int(spec.get("w", 1)), rule, policy)
        if kind == "buffer":
            return BufferGenerator(collection, int(spec.get("b", 0)), policy)
        if kind in ("incremental", "identifier"):
            return IncrementalIdentifier(collection, policy)
        if kind == "full_information":
            return FullInformationIdentifier(collection, policy)
        if kind == "coding":
            return CodingGenerator(collection, int(spec.get("rounds_cap", Defaults.CODING_ROUND_CAP)), policy)
        if kind == "threshold_element":
            return ThresholdElementGenerator()
        raise ConfigError(f"Unknown generator kind: {kind!r}")
