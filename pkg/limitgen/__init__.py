"""
limitgen - Generation in the limit under bounded memory: exact set algebra,
generators, adversaries and density measurement.
"""

try:
    from limitgen._version import version as __version__
except ImportError:
    __version__ = "0.1.0"

from limitgen.config import ExperimentConfig, ProbePolicy
from limitgen.ranges import RangeSet
from limitgen.sets import (
    OpaqueSet,
    SetExpr,
    StructuredSet,
    Verdict,
    difference,
    empty_set,
    finiteness,
    intersect_all,
    intersection,
    is_infinite,
    is_subset,
    set_equal,
    symmetric_difference,
    union,
    universe,
)
from limitgen.languages import (
    AlmostOrder,
    Collection,
    CountableCollection,
    FiniteCollection,
    Language,
    almost_compare,
    signature,
    signature_intersection,
)
from limitgen.density import empirical_density, exact_lower_density, exact_upper_density
from limitgen.combinatorics import (
    SubsetMask,
    minimax_buffer,
    minimax_memoryless,
    sperner_width,
    symmetric_chain_decomposition,
)
from limitgen.harness import classify_single_example, run_game
from limitgen.exceptions import (
    ConfigError,
    LimitGenError,
    OutOfRangeError,
    ProbeExhaustedError,
    SerializationError,
)

__all__ = [
    # Configuration
    "ExperimentConfig",
    "ProbePolicy",
    # Set algebra
    "RangeSet",
    "SetExpr",
    "StructuredSet",
    "OpaqueSet",
    "Verdict",
    "intersection",
    "union",
    "difference",
    "symmetric_difference",
    "intersect_all",
    "is_subset",
    "set_equal",
    "finiteness",
    "is_infinite",
    "universe",
    "empty_set",
    # Languages
    "Language",
    "Collection",
    "FiniteCollection",
    "CountableCollection",
    "AlmostOrder",
    "almost_compare",
    "signature",
    "signature_intersection",
    # Density
    "empirical_density",
    "exact_upper_density",
    "exact_lower_density",
    # Combinatorics
    "SubsetMask",
    "sperner_width",
    "symmetric_chain_decomposition",
    "minimax_memoryless",
    "minimax_buffer",
    # Games
    "run_game",
    "classify_single_example",
    # Exceptions
    "LimitGenError",
    "OutOfRangeError",
    "ProbeExhaustedError",
    "ConfigError",
    "SerializationError",
]
