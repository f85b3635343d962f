"""
Generators and identifiers under different memory budgets.
"""

from limitgen.generators.base import (
    CollectionGenerator,
    Generator,
    GeneratorKind,
    GeneratorOutput,
    OutputMode,
    infinite_or_universe,
)
from limitgen.generators.buffer import BufferGenerator, BufferState, buffer_step, initial_buffer_state
from limitgen.generators.coding import (
    CodingGenerator,
    CofinalRecursion,
    cofinal_subsets,
    pair,
    seq_decode,
    seq_encode,
    unpair,
)
from limitgen.generators.factory import GeneratorFactory
from limitgen.generators.incremental import (
    FullInformationIdentifier,
    IncrementalIdentifier,
    incremental_identifier_step,
    topological_order,
)
from limitgen.generators.memoryless import (
    CanonicalIntersectionGenerator,
    CountableMemorylessGenerator,
    MemorylessElementGenerator,
    MemorylessIndexGenerator,
    ThresholdElementGenerator,
    canonical_intersection_step,
    default_bijection,
    memoryless_countable_step,
    threshold_element_step,
)
from limitgen.generators.window import (
    LastElementStrategy,
    WindowGenerator,
    WindowIntersectionStrategy,
    WindowRule,
    WindowState,
    WindowStrategy,
    WindowStrategyFactory,
    window_step,
)

__all__ = [
    # Base
    "Generator",
    "CollectionGenerator",
    "GeneratorKind",
    "GeneratorOutput",
    "OutputMode",
    "infinite_or_universe",
    # Memoryless
    "CanonicalIntersectionGenerator",
    "CountableMemorylessGenerator",
    "MemorylessElementGenerator",
    "MemorylessIndexGenerator",
    "ThresholdElementGenerator",
    "canonical_intersection_step",
    "memoryless_countable_step",
    "threshold_element_step",
    "default_bijection",
    # Window
    "WindowGenerator",
    "WindowRule",
    "WindowState",
    "WindowStrategy",
    "WindowStrategyFactory",
    "LastElementStrategy",
    "WindowIntersectionStrategy",
    "window_step",
    # Buffer
    "BufferGenerator",
    "BufferState",
    "buffer_step",
    "initial_buffer_state",
    # Identification
    "IncrementalIdentifier",
    "FullInformationIdentifier",
    "incremental_identifier_step",
    "topological_order",
    # Coding
    "CodingGenerator",
    "CofinalRecursion",
    "cofinal_subsets",
    "pair",
    "unpair",
    "seq_encode",
    "seq_decode",
    # Factory
    "GeneratorFactory",
]
