"""
Hard instances, enumeration schedules and adaptive adversaries.
"""

from limitgen.adversaries.adaptive import (
    AdaptiveEnumeration,
    CheckpointRow,
    ElementCase,
    ElementClassification,
    PartitionBound,
    StagedWindowEnumeration,
    WindowSafe,
    as_rule,
    checkpoint_rows,
    classify_element_rule,
    element_memoryless_adversary,
    index_pair_adversary,
    partition_lower_density_bound,
    window_staged_adversary,
)
from limitgen.adversaries.instances import (
    DistinguishingTexts,
    HardInstance,
    InstanceCertificate,
    INSTANCE_KINDS,
    alternating_factorial_blocks,
    antichain_reduction_holds,
    build_instance,
    expected_meets,
    generation_counterexample,
    identification_counterexample,
    index_pair_instance,
    length_threshold_instance,
    lower_density_instance,
    mixed_instance,
    sperner_hard_instance,
    window_hard_instance,
    zero_density_partition,
)
from limitgen.adversaries.streams import (
    StreamFactory,
    bad_point_interleaver,
    canonical_enumeration,
    finitely_repeating_enumeration,
)

__all__ = [
    # Instances
    "HardInstance",
    "InstanceCertificate",
    "DistinguishingTexts",
    "sperner_hard_instance",
    "window_hard_instance",
    "zero_density_partition",
    "lower_density_instance",
    "index_pair_instance",
    "identification_counterexample",
    "generation_counterexample",
    "alternating_factorial_blocks",
    "mixed_instance",
    "length_threshold_instance",
    "build_instance",
    "INSTANCE_KINDS",
    "antichain_reduction_holds",
    "expected_meets",
    # Streams
    "canonical_enumeration",
    "finitely_repeating_enumeration",
    "bad_point_interleaver",
    "StreamFactory",
    # Adaptive
    "AdaptiveEnumeration",
    "ElementCase",
    "ElementClassification",
    "classify_element_rule",
    "element_memoryless_adversary",
    "index_pair_adversary",
    "StagedWindowEnumeration",
    "WindowSafe",
    "window_staged_adversary",
    "CheckpointRow",
    "PartitionBound",
    "checkpoint_rows",
    "partition_lower_density_bound",
    "as_rule",
]
