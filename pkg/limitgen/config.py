"""
Configuration for limitgen: probe policy, library-wide defaults and
experiment configuration files.
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from limitgen.exceptions import ConfigError

logger = logging.getLogger(__name__)


# ==================== Defaults ====================

class Defaults:
    """Library-wide constants. Everything here can be overridden per call."""
    WITNESS_COUNT = 64
    PROBE_HORIZON = 10 ** 6
    CELL_BUDGET = 4096
    CORRECTION_CAP = 10 ** 4
    DENSITY_MIN_EXPONENT = 4
    DENSITY_MAX_EXPONENT = 20
    BURN_IN = 0.5
    COVERAGE_FACTOR = 4
    CODING_ROUND_CAP = 24
    WINDOW_STAGE_BUDGET = 10 ** 3
    CONVERGENCE_TAIL = 0.10
    ADVERSARY_PROBE = 2000
    PERIOD_SEARCH_LIMIT = 10 ** 5
    SCD_MAX_N = 20
    ANTICHAIN_SEARCH_MAX_N = 6
    BRUTEFORCE_MAX_CANDIDATES = 2 * 10 ** 6


HORIZON_ENV_VAR = "LIMITGEN_PROBE_HORIZON"
CONFIG_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ProbePolicy:
    """
    How far Opaque sets are probed before a verdict becomes Unknown.

    Attributes:
        witness_count: Members that must be found below the horizon to
            certify a set as infinite.
        horizon: Largest element value (exclusive) any probe may inspect.
        universe_bound: Optional declared bound: every member of an Opaque
            set lies below it. Lets a full scan certify finiteness.
    """
    witness_count: int = Defaults.WITNESS_COUNT
    horizon: int = Defaults.PROBE_HORIZON
    universe_bound: Optional[int] = None

    def __post_init__(self):
        if self.witness_count < 1:
            raise ValueError(f"witness_count must be positive, got {self.witness_count}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be positive, got {self.horizon}")

    @classmethod
    def from_env(cls, **overrides) -> "ProbePolicy":
        """Build a policy, taking the horizon from LIMITGEN_PROBE_HORIZON if set."""
        raw = os.environ.get(HORIZON_ENV_VAR)
        if raw is not None and "horizon" not in overrides:
            try:
                overrides["horizon"] = int(raw)
            except ValueError:
                raise ConfigError(f"{HORIZON_ENV_VAR} must be an integer, got {raw!r}")
            logger.debug(f"Probe horizon {overrides['horizon']} taken from environment")
        return cls(**overrides)

    def with_horizon(self, horizon: Optional[int]) -> "ProbePolicy":
        if horizon is None:
            return self
        return replace(self, horizon=horizon)


# ==================== Experiment configuration ====================

INSTANCE_KINDS = (
    "sperner", "window", "lower_density", "index_pair",
    "identification", "generation", "mixed", "length_threshold",
)
GENERATOR_KINDS = (
    "canonical", "window", "buffer", "incremental", "identifier",
    "coding", "memoryless_countable", "full_information", "threshold_element",
)
STREAM_POLICIES = ("canonical", "finitely_repeating", "bad_point", "fixed")
WINDOW_RULES = ("last", "last_element", "intersect", "intersect_window", "window")
INDEX_CRITERIA = ("exact", "approximate", "generation")


@dataclass
class SamplingConfig:
    every: int = 100
    burn_in: float = Defaults.BURN_IN
    schedule: Optional[List[int]] = None


@dataclass
class AssertionConfig:
    """Expectations checked after a run; a failed one makes the CLI exit 1."""
    upper_density_sup: Optional[Fraction] = None
    upper_density_min: Optional[Fraction] = None
    upper_density_max: Optional[Fraction] = None
    tolerance: float = 0.0
    require_convergence: bool = True
    require_known_verdicts: bool = False


@dataclass
class ExperimentConfig:
    """
    A validated experiment description (schema version 1).

    Unknown keys anywhere are rejected with a ConfigError listing every
    offending path.
    """
    name: str
    instance: Dict[str, Any]
    generator: Dict[str, Any]
    stream: Dict[str, Any] = field(default_factory=lambda: {"policy": "canonical"})
    rounds: int = 1000
    seed: int = 0
    probe_horizon: Optional[int] = None
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    assertions: AssertionConfig = field(default_factory=AssertionConfig)
    output_dir: str = "out"
    output_format: str = "csv"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        problems = _validate(data)
        if problems:
            raise ConfigError(
                f"Invalid experiment configuration ({len(problems)} problem(s))",
                diagnostics=problems,
            )
        sampling = SamplingConfig(**data.get("sampling", {}))
        raw_assert = dict(data.get("assertions", {}))
        for key in ("upper_density_sup", "upper_density_min", "upper_density_max"):
            if raw_assert.get(key) is not None:
                raw_assert[key] = Fraction(str(raw_assert[key]))
        output = data.get("output", {})
        return cls(
            name=data["name"],
            instance=dict(data["instance"]),
            generator=dict(data["generator"]),
            stream=dict(data.get("stream", {"policy": "canonical"})),
            rounds=int(data.get("rounds", 1000)),
            seed=int(data.get("seed", 0)),
            probe_horizon=data.get("probe_horizon"),
            sampling=sampling,
            assertions=AssertionConfig(**raw_assert),
            output_dir=output.get("dir", "out"),
            output_format=output.get("format", "csv"),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigError(f"Configuration file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Configuration file {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration file {path} must hold a JSON object")
        logger.info(f"Loaded experiment configuration from {path}")
        return cls.from_dict(data)

    def probe_policy(self) -> ProbePolicy:
        return ProbePolicy.from_env().with_horizon(self.probe_horizon)


_TOP_KEYS = {
    "schema", "name", "instance", "generator", "stream", "rounds", "seed",
    "probe_horizon", "sampling", "assertions", "output",
}
_INSTANCE_KEYS = {"kind", "k", "a", "b", "c", "z", "target"}
_GENERATOR_KEYS = {"kind", "w", "b", "strategy", "rounds_cap", "criterion"}
_STREAM_KEYS = {"policy", "cap", "seed", "bad_point", "coverage_factor"}
_SAMPLING_KEYS = {f.name for f in fields(SamplingConfig)}
_ASSERTION_KEYS = {f.name for f in fields(AssertionConfig)}
_OUTPUT_KEYS = {"dir", "format"}


def _unknown(section: str, data: Dict[str, Any], allowed: set) -> List[str]:
    return [f"{section}.{key}: unknown key" for key in sorted(set(data) - allowed)]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _typed(section: str, data: Any, checks: Dict[str, Any]) -> List[str]:
    """Type problems in one section; `checks` maps a key to a predicate and a description."""
    if not isinstance(data, dict):
        return []
    problems = []
    for key, (ok, expected) in checks.items():
        if key in data and data[key] is not None and not ok(data[key]):
            problems.append(f"{section}.{key}: expected {expected}, got {data[key]!r}")
    return problems


def _choice(options: Tuple[str, ...]) -> Callable[[Any], bool]:
    return lambda v: isinstance(v, str) and v.lower() in options


_NONNEG = (lambda v: _is_int(v) and v >= 0, "a non-negative integer")
_POSITIVE = (lambda v: _is_int(v) and v >= 1, "a positive integer")
_INSTANCE_CHECKS = {"k": _NONNEG, "target": _POSITIVE, "a": _NONNEG, "b": _NONNEG, "c": _NONNEG, "z": _POSITIVE}
_GENERATOR_CHECKS = {
    "w": _POSITIVE,
    "b": _NONNEG,
    "rounds_cap": _POSITIVE,
    "strategy": (_choice(WINDOW_RULES), f"one of {', '.join(WINDOW_RULES)}"),
    "criterion": (_choice(INDEX_CRITERIA), f"one of {', '.join(INDEX_CRITERIA)}"),
}
_STREAM_CHECKS = {
    "cap": _POSITIVE,
    "seed": (_is_int, "an integer"),
    "bad_point": _NONNEG,
    "coverage_factor": _POSITIVE,
}


def _validate(data: Dict[str, Any]) -> List[str]:
    problems: List[str] = []
    if not isinstance(data, dict):
        return ["<root>: expected a JSON object"]
    problems.extend(_unknown("<root>", data, _TOP_KEYS))
    if data.get("schema") != CONFIG_SCHEMA_VERSION:
        problems.append(f"<root>.schema: expected {CONFIG_SCHEMA_VERSION}, got {data.get('schema')!r}")
    if not isinstance(data.get("name"), str) or not data.get("name"):
        problems.append("<root>.name: required non-empty string")

    sections = (
        ("instance", _INSTANCE_KEYS, True),
        ("generator", _GENERATOR_KEYS, True),
        ("stream", _STREAM_KEYS, False),
        ("sampling", _SAMPLING_KEYS, False),
        ("assertions", _ASSERTION_KEYS, False),
        ("output", _OUTPUT_KEYS, False),
    )
    for name, allowed, required in sections:
        value = data.get(name)
        if value is None:
            if required:
                problems.append(f"{name}: required section missing")
            continue
        if not isinstance(value, dict):
            problems.append(f"{name}: expected an object")
            continue
        problems.extend(_unknown(name, value, allowed))

    instance = data.get("instance") or {}
    if isinstance(instance, dict) and instance.get("kind") not in INSTANCE_KINDS:
        problems.append(f"instance.kind: expected one of {', '.join(INSTANCE_KINDS)}")
    generator = data.get("generator") or {}
    if isinstance(generator, dict) and generator.get("kind") not in GENERATOR_KINDS:
        problems.append(f"generator.kind: expected one of {', '.join(GENERATOR_KINDS)}")
    stream = data.get("stream") or {}
    if isinstance(stream, dict) and stream.get("policy", "canonical") not in STREAM_POLICIES:
        problems.append(f"stream.policy: expected one of {', '.join(STREAM_POLICIES)}")
    problems.extend(_typed("instance", instance, _INSTANCE_CHECKS))
    problems.extend(_typed("generator", generator, _GENERATOR_CHECKS))
    problems.extend(_typed("stream", stream, _STREAM_CHECKS))
    rounds = data.get("rounds", 1000)
    if not _is_int(rounds) or rounds < 1:
        problems.append("<root>.rounds: expected a positive integer")
    if not _is_int(data.get("seed", 0)):
        problems.append("<root>.seed: expected an integer")
    horizon = data.get("probe_horizon")
    if horizon is not None and not (_is_int(horizon) and horizon >= 1):
        problems.append("<root>.probe_horizon: expected a positive integer")
    output = data.get("output") or {}
    if isinstance(output, dict) and output.get("format", "csv") not in ("csv", "json"):
        problems.append("output.format: expected 'csv' or 'json'")
    return problems
