"""
Command-line front end.

    limitgen run CONFIG        play one experiment, write transcript/summary/plot
    limitgen suite NAME        run an acceptance suite, print a pass/fail table
    limitgen scd [--n] N       print a symmetric chain decomposition as JSON lines
    limitgen density SET...    empirical density ratio series of built-in sets, optionally plotted
    limitgen instance --kind   build a hard instance and emit it as JSON

Exit codes: 0 success, 1 failed assertion or suite check, 2 configuration error.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from limitgen.adversaries import build_instance
from limitgen.adversaries.streams import StreamFactory
from limitgen.builtins import OPAQUE_BUILTINS, STRUCTURED_BUILTINS
from limitgen.combinatorics import symmetric_chain_decomposition
from limitgen.config import INSTANCE_KINDS, AssertionConfig, ExperimentConfig, ProbePolicy
from limitgen.density import empirical_density, factorial_schedule, geometric_schedule
from limitgen.exceptions import ConfigError, LimitGenError, VerdictUnknownError
from limitgen.generators import GeneratorFactory
from limitgen.harness import IndexCriterion, require_known, run_game
from limitgen.reporting import format_table, plot_density, series_plot, write_summary, write_suite_report, write_transcript
from limitgen.serialization import dumps, instance_to_dict
from limitgen.sets import SetExpr, universe
from limitgen.suites import SUITES, SuiteOptions, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


# ==================== run ====================

def _apply_overrides(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    if args.rounds is not None:
        cfg.rounds = args.rounds
    if args.probe_horizon is not None:
        cfg.probe_horizon = args.probe_horizon
    if args.out_dir is not None:
        cfg.output_dir = args.out_dir
    if args.format is not None:
        cfg.output_format = args.format
    return cfg


def check_assertions(summary: Dict[str, Any], expect: AssertionConfig) -> List[str]:
    """Names of the declared expectations the summary does not meet."""
    failed = []
    if expect.require_convergence and summary.get("t_star") is None:
        failed.append("convergence")
    sup = summary.get("upper_density_sup")
    tolerance = Fraction(str(expect.tolerance))
    if expect.upper_density_sup is not None:
        if sup is None or abs(sup - expect.upper_density_sup) > tolerance:
            failed.append("upper_density_sup")
    if expect.upper_density_min is not None and (sup is None or sup < expect.upper_density_min - tolerance):
        failed.append("upper_density_min")
    if expect.upper_density_max is not None and (sup is None or sup > expect.upper_density_max + tolerance):
        failed.append("upper_density_max")
    return failed


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _apply_overrides(ExperimentConfig.load(args.config), args)
    policy = cfg.probe_policy()
    spec = cfg.instance
    try:
        instance = build_instance(
            spec["kind"], spec.get("k"), spec.get("target"),
            **{key: spec[key] for key in ("a", "b", "c", "z") if key in spec},
        )
        criterion = IndexCriterion.from_string(cfg.generator.get("criterion", "exact"))
        gen = GeneratorFactory.create(cfg.generator, instance.collection, policy)
        stream = StreamFactory.create(cfg.stream, instance.target, instance.fixed_enumeration, cfg.seed)
    except (ValueError, IndexError, TypeError) as e:
        raise ConfigError(f"Invalid experiment setup: {e}", diagnostics=[str(e)])

    tr = run_game(gen, stream, instance.target, cfg.rounds, cfg.sampling, criterion, policy)
    out_dir = Path(cfg.output_dir)
    transcript_path = write_transcript(tr, out_dir / f"{cfg.name}.transcript.{cfg.output_format}", cfg.output_format)
    plot_path = plot_density(tr, out_dir / f"{cfg.name}.density.svg",
                             reference=cfg.assertions.upper_density_sup, title=cfg.name)

    failed = check_assertions(tr.summary, cfg.assertions)
    if cfg.assertions.require_known_verdicts:
        try:
            require_known(tr)
        except VerdictUnknownError as e:
            logger.warning(f"Experiment {cfg.name}: {e}")
            failed.append("known_verdicts")
    summary = {
        "name": cfg.name,
        "instance": instance.name,
        "generator": tr.generator,
        "stream": tr.stream,
        "seed": cfg.seed,
        **tr.summary,
        "artifacts": {"transcript": transcript_path.name, "plot": plot_path.name},
        "failed": failed,
        "passed": not failed,
    }
    write_summary(summary, out_dir / f"{cfg.name}.summary.json")
    print(dumps({k: summary[k] for k in ("name", "t_star", "upper_density_sup", "failed") if k in summary}))
    if failed:
        logger.error(f"Experiment {cfg.name} failed: {', '.join(failed)}")
        return EXIT_FAILED
    return EXIT_OK


# ==================== suite / scd / instance ====================

def cmd_suite(args: argparse.Namespace) -> int:
    policy = ProbePolicy.from_env().with_horizon(args.probe_horizon)
    options = SuiteOptions(rounds=args.rounds, seed=args.seed or 0, workers=args.workers, policy=policy)
    result = run_suite(args.name, options)
    print(format_table(result.rows))
    out_dir = Path(args.out_dir or "out")
    write_suite_report(result.name, result.rows, out_dir / f"suite-{result.name}.json")
    print(f"{result.name}: {'PASS' if result.passed else 'FAIL'}")
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_scd(args: argparse.Namespace) -> int:
    if args.n is not None and args.n_flag is not None and args.n != args.n_flag:
        raise ConfigError(f"Conflicting sizes: {args.n} and --n {args.n_flag}")
    n = args.n if args.n is not None else args.n_flag
    if n is None:
        raise ConfigError("scd needs n, either positionally or as --n")
    if n < 0:
        raise ConfigError(f"n must be >= 0, got {n}")
    for chain in symmetric_chain_decomposition(n):
        print(json.dumps([list(mask.members) for mask in chain]))
    return EXIT_OK


def _builtin_set(text: str) -> SetExpr:
    """'evens', 'multiples:3', 'primes' and the like."""
    name, _, arg = text.partition(":")
    builder = STRUCTURED_BUILTINS.get(name) or OPAQUE_BUILTINS.get(name)
    if builder is None:
        known = sorted(set(STRUCTURED_BUILTINS) | set(OPAQUE_BUILTINS))
        raise ConfigError(f"Unknown set '{name}'. Known: {', '.join(known)}")
    try:
        return builder(int(arg)) if arg else builder()
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Cannot build '{text}': {e}")


def cmd_density(args: argparse.Namespace) -> int:
    sets = {text: _builtin_set(text) for text in args.sets}
    if args.schedule == "factorial":
        schedule = factorial_schedule(args.rounds or 3)
    else:
        schedule = geometric_schedule(max_exponent=args.max_exponent)
    series = {}
    for text, s in sets.items():
        estimate = empirical_density(s, universe(), schedule, burn_in=0.0)
        series[text] = [float(r) for r in estimate.ratios]
        print(dumps({"set": text, "upper_est": estimate.upper_est, "lower_est": estimate.lower_est}, indent=None))
    if args.plot:
        path = series_plot(series, list(estimate.horizons), args.plot)
        logger.info(f"Wrote ratio series plot to {path}")
    return EXIT_OK


def cmd_instance(args: argparse.Namespace) -> int:
    try:
        instance = build_instance(args.kind, args.k, args.target)
    except (ValueError, IndexError) as e:
        raise ConfigError(str(e))
    problems = instance.validate()
    for problem in problems:
        logger.error(f"{instance.name}: {problem}")
    text = dumps(instance_to_dict(instance))
    if args.emit:
        path = Path(args.emit)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
        logger.info(f"Wrote {instance.name} to {path}")
    else:
        print(text)
    return EXIT_FAILED if problems else EXIT_OK


# ==================== Parser ====================

def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="Seed for randomized streams")
    p.add_argument("--rounds", type=int, default=None, help="Rounds per game (T_max)")
    p.add_argument("--probe-horizon", type=int, default=None, help="Probe horizon for opaque sets")
    p.add_argument("--out-dir", default=None, help="Directory for artifacts")
    p.add_argument("--format", choices=("csv", "json"), default=None, help="Transcript format")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="limitgen", description="Generation in the limit under bounded memory")
    verbosity = p.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Errors only")
    sub = p.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="Run an experiment configuration")
    p_run.add_argument("config", help="Path to an experiment JSON file")
    _add_run_flags(p_run)

    p_suite = sub.add_parser("suite", help="Run an acceptance suite")
    p_suite.add_argument("name", choices=sorted(SUITES))
    p_suite.add_argument("--workers", type=int, default=1, help="Threads for independent games")
    _add_run_flags(p_suite)

    p_scd = sub.add_parser("scd", help="Symmetric chain decomposition of subsets of [n]")
    p_scd.add_argument("n", type=int, nargs="?", default=None)
    p_scd.add_argument("--n", dest="n_flag", type=int, default=None, help="Same as the positional n")

    p_dens = sub.add_parser("density", help="Empirical density ratio series of built-in sets")
    p_dens.add_argument("sets", nargs="+", help="Built-in set names, e.g. factorial_blocks or multiples:3")
    p_dens.add_argument("--schedule", choices=("geometric", "factorial"), default="geometric")
    p_dens.add_argument("--max-exponent", type=int, default=16, help="Largest horizon 2**e on the geometric schedule")
    p_dens.add_argument("--rounds", type=int, default=None, help="Factorial schedule pairs")
    p_dens.add_argument("--plot", default=None, help="Write an SVG of the ratio series here")

    p_inst = sub.add_parser("instance", help="Build a hard instance")
    p_inst.add_argument("--kind", required=True, choices=INSTANCE_KINDS)
    p_inst.add_argument("--k", type=int, default=None, help="Collection size for sized constructions")
    p_inst.add_argument("--target", type=int, default=None, help="1-based index of the target language")
    p_inst.add_argument("--emit", default=None, help="Write JSON here instead of stdout")
    return p


COMMANDS = {
    "run": cmd_run,
    "suite": cmd_suite,
    "scd": cmd_scd,
    "density": cmd_density,
    "instance": cmd_instance,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        for line in e.diagnostics:
            print(f"  {line}", file=sys.stderr)
        return EXIT_CONFIG
    except LimitGenError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
