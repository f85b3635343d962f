"""
Generation games: a generator against an enumeration of a target language.

run_game() plays a fixed number of rounds and records a verdict for every
output. "In the limit" is checked with a finite-horizon surrogate: the run
converges at t* when every round from t* on is valid and no violation
falls in the final tail of the run.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import islice
from math import ceil
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import pandas as pd

from limitgen.config import Defaults, ProbePolicy, SamplingConfig
from limitgen.density import empirical_density, exact_lower_density, exact_upper_density
from limitgen.enumerations import EnumerationStream
from limitgen.exceptions import VerdictUnknownError
from limitgen.generators.base import Generator, GeneratorOutput, OutputMode
from limitgen.languages import AlmostOrder, Language, almost_compare
from limitgen.sets import SetExpr, Verdict, is_subset, set_equal

logger = logging.getLogger(__name__)

T = TypeVar("T")


class IndexCriterion(Enum):
    """When an index output L_i counts as valid against target K."""
    EXACT = "exact"                # L_i = K
    APPROXIMATE = "approximate"    # L_i and K differ in finitely many elements
    GENERATION = "generation"      # L_i is contained in K

    @classmethod
    def from_string(cls, value: str) -> "IndexCriterion":
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"Unknown index criterion '{value}'. Expected one of: exact, approximate, generation")


@dataclass(frozen=True)
class RoundRecord:
    """
    Attributes:
        t: 1-based round number.
        x: Element presented this round.
        output: What the generator emitted.
        valid: True/False, or None when the verdict is Unknown.
        upper_density / lower_density: Density estimates of a set output,
            attached at sampling rounds only.
    """
    t: int
    x: int
    output: GeneratorOutput
    valid: Optional[bool]
    upper_density: Optional[Fraction] = None
    lower_density: Optional[Fraction] = None

    @property
    def violation(self) -> bool:
        return self.valid is not True


@dataclass
class GameTranscript:
    generator: str
    stream: str
    target: str
    rounds: List[RoundRecord]
    t_star: Optional[int] = None
    summary: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rounds)

    def violations(self) -> List[int]:
        return [r.t for r in self.rounds if r.violation]

    def sampled(self) -> List[RoundRecord]:
        return [r for r in self.rounds if r.upper_density is not None]

    def to_frame(self) -> pd.DataFrame:
        """One row per round, in the CSV column layout."""
        return pd.DataFrame({
            "round": [r.t for r in self.rounds],
            "input": [str(r.x) for r in self.rounds],
            "output_kind": [r.output.mode.value for r in self.rounds],
            "output_repr": [r.output.describe() for r in self.rounds],
            "valid": ["unknown" if r.valid is None else str(r.valid).lower() for r in self.rounds],
            "upper_density": ["" if r.upper_density is None else str(r.upper_density) for r in self.rounds],
        })


# ==================== Validity ====================

class ValidityChecker:
    """Decides each round's verdict; verdicts on repeated outputs are cached."""

    def __init__(self, gen: Generator, target: Language, criterion: IndexCriterion,
                 policy: ProbePolicy):
        self.gen = gen
        self.target = target
        self.criterion = criterion
        self.policy = policy
        self._cache: Dict[Any, Optional[bool]] = {}

    def _cached(self, key: Any, decide: Callable[[], Optional[bool]]) -> Optional[bool]:
        try:
            if key in self._cache:
                return self._cache[key]
        except TypeError:
            return decide()
        verdict = self._cache[key] = decide()
        return verdict

    def _set_verdict(self, s: SetExpr) -> Optional[bool]:
        verdict = is_subset(s, self.target.expr, self.policy)
        return None if verdict.unknown else verdict.holds

    def _index_verdict(self, i: int) -> Optional[bool]:
        hypothesis = self.gen.hypothesis(i).expr
        if self.criterion is IndexCriterion.GENERATION:
            return self._set_verdict(hypothesis)
        if self.criterion is IndexCriterion.EXACT:
            verdict = set_equal(hypothesis, self.target.expr, self.policy)
            return None if verdict is Verdict.UNKNOWN else verdict is Verdict.TRUE
        order = almost_compare(hypothesis, self.target.expr, self.policy)
        return None if order is AlmostOrder.UNKNOWN else order is AlmostOrder.EQUIVALENT

    def check(self, out: GeneratorOutput, seen: set) -> Optional[bool]:
        if out.mode is OutputMode.SET:
            return self._cached(("set", out.value), lambda: self._set_verdict(out.value))
        if out.mode is OutputMode.INDEX:
            return self._cached(("index", out.value), lambda: self._index_verdict(out.value))
        return self.target.contains(out.value) and out.value not in seen


# ==================== Games ====================

def _density_sample(s: SetExpr, k: SetExpr, sampling: SamplingConfig):
    upper = exact_upper_density(s, k)
    lower = exact_lower_density(s, k)
    if upper is None or lower is None:
        estimate = empirical_density(s, k, sampling.schedule, sampling.burn_in)
        upper = estimate.upper_est if upper is None else upper
        lower = estimate.lower_est if lower is None else lower
    return upper, lower


def run_game(
    gen: Generator,
    stream: EnumerationStream,
    target: Language,
    rounds: int,
    sampling: Optional[SamplingConfig] = None,
    criterion: IndexCriterion = IndexCriterion.EXACT,
    policy: Optional[ProbePolicy] = None,
    tail: float = Defaults.CONVERGENCE_TAIL,
) -> GameTranscript:
    """
    Play `rounds` rounds of gen against stream and record every verdict.

    Set outputs are valid when contained in the target; index outputs
    follow `criterion`; element outputs must be target members not yet
    presented. Unknown verdicts are recorded as such and count as
    violations for convergence.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be positive, got {rounds}")
    sampling = sampling or SamplingConfig()
    policy = policy or ProbePolicy.from_env()
    checker = ValidityChecker(gen, target, criterion, policy)
    densities: Dict[Any, tuple] = {}

    logger.info(f"Game start: {gen.describe()} vs {stream.describe()}, {rounds} rounds")
    state = gen.initial_state()
    seen: set = set()
    records: List[RoundRecord] = []
    for t, x in enumerate(islice(stream.iterate(), rounds), start=1):
        seen.add(x)
        out, state = gen.step(state, x)
        valid = checker.check(out, seen)
        if valid is None:
            logger.warning(f"Round {t}: verdict Unknown for output {out.describe()}")
        upper = lower = None
        if out.mode is OutputMode.SET and t % sampling.every == 0:
            key = out.value
            try:
                pair = densities.get(key)
            except TypeError:
                key, pair = None, None
            if pair is None:
                pair = _density_sample(out.value, target.expr, sampling)
                if key is not None:
                    densities[key] = pair
            upper, lower = pair
        records.append(RoundRecord(t, x, out, valid, upper, lower))

    transcript = GameTranscript(gen.describe(), stream.describe(), target.name, records)
    transcript.t_star = detect_convergence(transcript, tail)
    transcript.summary = summarize(transcript)
    logger.info(f"Game finished: t_star={transcript.t_star}, violations={len(transcript.violations())}")
    return transcript


def detect_convergence(tr: GameTranscript, tail: float = Defaults.CONVERGENCE_TAIL) -> Optional[int]:
    """
    1 + the last violating round, or None when a violation falls in the
    final `tail` fraction of the run (too little evidence).
    """
    violations = tr.violations()
    if not violations:
        return 1
    total = len(tr.rounds)
    last = violations[-1]
    if last > total - ceil(total * tail):
        return None
    return last + 1


def summarize(tr: GameTranscript) -> Dict[str, Any]:
    unknown = sum(1 for r in tr.rounds if r.valid is None)
    invalid = sum(1 for r in tr.rounds if r.valid is False)
    summary: Dict[str, Any] = {
        "rounds": len(tr.rounds),
        "t_star": tr.t_star,
        "violations": invalid,
        "unknown": unknown,
    }
    if tr.t_star is not None:
        summary["violations_before_t_star"] = sum(1 for t in tr.violations() if t < tr.t_star)
        summary["violations_after_t_star"] = sum(1 for t in tr.violations() if t >= tr.t_star)
    profile = density_profile(tr)
    if profile.samples:
        summary.update(profile.aggregates())
    return summary


# ==================== Density ====================

@dataclass(frozen=True)
class DensityProfile:
    """Sampled (t, upper, lower) density estimates from t* on."""
    samples: tuple

    def _column(self, i: int) -> List[Fraction]:
        return [s[i] for s in self.samples]

    @property
    def sup_upper(self) -> Fraction:
        return max(self._column(1))

    @property
    def inf_upper(self) -> Fraction:
        return min(self._column(1))

    @property
    def sup_lower(self) -> Fraction:
        return max(self._column(2))

    @property
    def inf_lower(self) -> Fraction:
        return min(self._column(2))

    def aggregates(self) -> Dict[str, Fraction]:
        return {
            "upper_density_sup": self.sup_upper,
            "upper_density_inf": self.inf_upper,
            "lower_density_sup": self.sup_lower,
            "lower_density_inf": self.inf_lower,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(t, float(u), float(l)) for t, u, l in self.samples],
            columns=["round", "upper_density", "lower_density"],
        )


def density_profile(tr: GameTranscript, target: Optional[Language] = None,
                    sampling: Optional[SamplingConfig] = None) -> DensityProfile:
    """
    Density samples at or after t*. Rounds without an attached estimate are
    filled in against `target` when one is given.
    """
    start = tr.t_star if tr.t_star is not None else len(tr.rounds) + 1
    sampling = sampling or SamplingConfig()
    samples = []
    for r in tr.rounds:
        if r.t < start or r.output.mode is not OutputMode.SET:
            continue
        if r.upper_density is not None:
            samples.append((r.t, r.upper_density, r.lower_density))
        elif target is not None and r.t % sampling.every == 0:
            upper, lower = _density_sample(r.output.value, target.expr, sampling)
            samples.append((r.t, upper, lower))
    return DensityProfile(tuple(samples))


# ==================== Job runner ====================

def run_jobs(jobs: Sequence[Callable[[], T]], workers: int = 1) -> List[T]:
    """Run independent jobs, returning results in job order whatever the completion order."""
    if workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


def require_known(tr: GameTranscript) -> None:
    """Raise when a transcript holds an Unknown verdict."""
    unknown = [r.t for r in tr.rounds if r.valid is None]
    if unknown:
        raise VerdictUnknownError(f"Rounds {unknown[:5]} have Unknown verdicts")
