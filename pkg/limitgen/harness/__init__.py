"""
Games, convergence detection, single-example classification and brute force.
"""

from limitgen.harness.bruteforce import (
    BruteforceReport,
    SymbolicCheck,
    Text,
    bruteforce_incremental,
    distinguishing_texts,
    symbolic_four_prefix_check,
    symbolic_three_language_check,
)
from limitgen.harness.classify import (
    Classification,
    ClassificationResult,
    bad_set,
    bad_set_bound,
    classify_single_example,
    finite_meets,
)
from limitgen.harness.games import (
    DensityProfile,
    GameTranscript,
    IndexCriterion,
    RoundRecord,
    ValidityChecker,
    density_profile,
    detect_convergence,
    require_known,
    run_game,
    run_jobs,
    summarize,
)

__all__ = [
    # Games
    "GameTranscript",
    "RoundRecord",
    "IndexCriterion",
    "ValidityChecker",
    "run_game",
    "detect_convergence",
    "summarize",
    "require_known",
    "DensityProfile",
    "density_profile",
    "run_jobs",
    # Classification
    "Classification",
    "ClassificationResult",
    "classify_single_example",
    "bad_set",
    "bad_set_bound",
    "finite_meets",
    # Brute force
    "BruteforceReport",
    "SymbolicCheck",
    "Text",
    "bruteforce_incremental",
    "distinguishing_texts",
    "symbolic_four_prefix_check",
    "symbolic_three_language_check",
]
