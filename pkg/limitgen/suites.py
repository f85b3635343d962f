"""
Acceptance suites.

Each suite plays a fixed grid of games or exhaustive checks and returns
one row per check. A row is a plain dict with at least `check` and
`passed`, so the CLI can print it as a table and dump it as JSON.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, List, Optional

from limitgen.adversaries import (
    antichain_reduction_holds,
    checkpoint_rows,
    element_memoryless_adversary,
    generation_counterexample,
    identification_counterexample,
    index_pair_adversary,
    index_pair_instance,
    length_threshold_instance,
    lower_density_instance,
    mixed_instance,
    partition_lower_density_bound,
    sperner_hard_instance,
    window_hard_instance,
)
from limitgen.adversaries.streams import canonical_enumeration, finitely_repeating_enumeration
from limitgen.builtins import at_least, evens, multiples, odds
from limitgen.combinatorics import (
    is_antichain,
    is_symmetric_chain_decomposition,
    max_antichain_bruteforce,
    middle_layer,
    minimax_buffer,
    minimax_memoryless,
    sperner_width,
    symmetric_chain_decomposition,
)
from limitgen.config import ProbePolicy, SamplingConfig
from limitgen.exceptions import LimitGenError
from limitgen.generators import (
    BufferGenerator,
    CanonicalIntersectionGenerator,
    CodingGenerator,
    CountableMemorylessGenerator,
    IncrementalIdentifier,
    MemorylessElementGenerator,
    MemorylessIndexGenerator,
    WindowGenerator,
    WindowRule,
    cofinal_subsets,
    pair,
    seq_decode,
    seq_encode,
    unpair,
)
from limitgen.harness import (
    Classification,
    IndexCriterion,
    bad_set,
    bad_set_bound,
    bruteforce_incremental,
    classify_single_example,
    density_profile,
    run_game,
    run_jobs,
    symbolic_four_prefix_check,
    symbolic_three_language_check,
)
from limitgen.languages import AlmostOrder, FiniteCollection, Language, almost_compare
from limitgen.sets import SetExpr, Verdict, finite_set, is_subset, set_equal, union, universe

logger = logging.getLogger(__name__)


@dataclass
class SuiteOptions:
    """
    Attributes:
        rounds: Overrides every suite's own round count when set.
        seed: Base seed for randomized streams.
        workers: Threads used for independent games.
        policy: Probe policy for Opaque verdicts.
    """
    rounds: Optional[int] = None
    seed: int = 0
    workers: int = 1
    policy: ProbePolicy = field(default_factory=ProbePolicy.from_env)

    def rounds_or(self, default: int) -> int:
        return self.rounds if self.rounds is not None else default


@dataclass
class SuiteResult:
    name: str
    rows: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r["passed"] for r in self.rows)

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [r for r in self.rows if not r["passed"]]


def _post(tr, start: int = 1):
    """Rounds at or after both t* and `start`; empty when the run did not converge."""
    if tr.t_star is None:
        return []
    first = max(tr.t_star, start)
    return [r for r in tr.rounds if r.t >= first]


def _distinct_outputs(records) -> list:
    seen, out = set(), []
    for r in records:
        if r.output.value not in seen:
            seen.add(r.output.value)
            out.append(r.output.value)
    return out


# ==================== minimax ====================

def _minimax_row(k: int, rounds: int, policy: ProbePolicy) -> Dict[str, Any]:
    inst = sperner_hard_instance(k)
    gen = CanonicalIntersectionGenerator(inst.collection, policy)
    tr = run_game(gen, canonical_enumeration(inst.target), inst.target, rounds,
                  SamplingConfig(every=100), policy=policy)
    expected = minimax_memoryless(k)
    samples = density_profile(tr).samples
    cells = list(inst.cells().values())

    def matches(out: SetExpr, cell: SetExpr) -> bool:
        # for k = 2 the only proper language is K minus {0}
        if k == 2:
            return almost_compare(out, cell, policy) is AlmostOrder.EQUIVALENT
        return set_equal(out, cell, policy) is Verdict.TRUE

    forced = all(
        any(matches(out, cell) for cell in cells)
        for out in _distinct_outputs(_post(tr))
    )
    exact = bool(samples) and all(upper == expected for _, upper, _ in samples)
    antichain_ok = is_antichain(list(inst.certificate.masks))
    reduction = antichain_reduction_holds(inst)
    return {
        "check": f"minimax k={k}",
        "expected": expected,
        "measured": samples[0][1] if samples else None,
        "t_star": tr.t_star,
        "single_cell_outputs": forced,
        "antichain_reduction": reduction,
        "passed": tr.t_star is not None and exact and forced and reduction and antichain_ok,
    }


def _lower_density_row(k: int, rounds: int, policy: ProbePolicy) -> Dict[str, Any]:
    inst = lower_density_instance(k)
    bins = [lang.expr for lang in inst.collection][1:]
    table_ok = all(row.holds for b in bins for row in checkpoint_rows(b, 8))
    gen = CanonicalIntersectionGenerator(inst.collection, policy)
    tr = run_game(gen, canonical_enumeration(inst.target), inst.target, rounds,
                  SamplingConfig(every=rounds), policy=policy)
    bounds = [partition_lower_density_bound(out, bins, 8, policy) for out in _distinct_outputs(_post(tr))]
    single = bool(bounds) and all(b is not None for b in bounds)
    late = single and all(
        row.ratio <= Fraction(1, 50)
        for b in bounds for row in b.rows if row.applies and row.t >= 7
    )
    return {
        "check": f"lower density k={k}",
        "expected": Fraction(1, 50),
        "t_star": tr.t_star,
        "checkpoint_bound": table_ok,
        "single_bin_outputs": single,
        "passed": tr.t_star is not None and table_ok and single and late,
    }


def suite_minimax(options: SuiteOptions) -> List[Dict[str, Any]]:
    rounds = options.rounds_or(5000)
    jobs: List[Callable[[], Dict[str, Any]]] = [
        (lambda k=k: _minimax_row(k, rounds, options.policy)) for k in (2, 3, 4, 5, 6)
    ]
    jobs += [(lambda k=k: _lower_density_row(k, min(rounds, 2000), options.policy)) for k in (3, 4)]
    return run_jobs(jobs, options.workers)


# ==================== window ====================

def _window_rows(k: int, rounds: int, policy: ProbePolicy) -> List[Dict[str, Any]]:
    inst = window_hard_instance(k)
    cells = inst.cells()
    zero = cells["Z"]
    allowed = [zero] + [union(zero, cells[f"A_{i}"]) for i in range(1, inst.certificate.width + 1)]
    expected = minimax_memoryless(k)
    rows = []
    for width in (1, 2, 4, 8):
        # from stage `width` on, consecutive A-points are separated by at least `width` Z-points
        start = inst.fixed_enumeration.deadline(width) + 1
        for rule in WindowRule:
            gen = WindowGenerator(inst.collection, width, rule, policy)
            tr = run_game(gen, inst.fixed_enumeration, inst.target, rounds, SamplingConfig(every=50), policy=policy)
            outputs = _distinct_outputs(_post(tr, start))
            inside = bool(outputs) and all(
                any(is_subset(out, a, policy).holds for a in allowed) for out in outputs
            )
            samples = [s for s in density_profile(tr).samples if s[0] >= start]
            bounded = bool(samples) and all(upper <= expected for _, upper, _ in samples)
            rows.append({
                "check": f"window k={k} W={width} {rule.value}",
                "expected": expected,
                "measured": max(upper for _, upper, _ in samples) if samples else None,
                "t_star": tr.t_star,
                "inside_z_or_cell": inside,
                "passed": tr.t_star is not None and inside and bounded,
            })
    return rows


def suite_window(options: SuiteOptions) -> List[Dict[str, Any]]:
    rounds = options.rounds_or(1000)
    grids = run_jobs([(lambda k=k: _window_rows(k, rounds, options.policy)) for k in (3, 5)], options.workers)
    return [row for rows in grids for row in rows]


# ==================== buffer ====================

BUFFER_GRID = ((5, 1), (5, 2), (5, 3), (4, 2), (6, 4))


def _buffer_row(k: int, b: int, rounds: int, policy: ProbePolicy) -> Dict[str, Any]:
    inst = sperner_hard_instance(k)
    coll = inst.collection
    gen = BufferGenerator(coll, b, policy)
    stream = canonical_enumeration(inst.target)
    tr = run_game(gen, stream, inst.target, rounds, SamplingConfig(every=1), policy=policy)

    state = gen.initial_state()
    residual_ok = True
    for x in stream.take(rounds):
        _, state = gen.step(state, x)
        holding = frozenset(i for i in coll.indices() if all(coll.language(i).contains(y) for y in state.stored))
        residual_ok = residual_ok and state.residual == holding and 1 in state.residual
    insertions = len(state.stored)

    expected = minimax_buffer(k, b)
    samples = density_profile(tr).samples
    sup = max((upper for _, upper, _ in samples), default=None)
    reached = sup is not None and sup >= expected and (b < k - 2 or sup == 1)
    return {
        "check": f"buffer k={k} b={b}",
        "expected": expected,
        "measured": sup,
        "insertions": insertions,
        "t_star": tr.t_star,
        "passed": tr.t_star is not None and reached and insertions <= min(b, k - 1) and residual_ok,
    }


def suite_buffer(options: SuiteOptions) -> List[Dict[str, Any]]:
    rounds = options.rounds_or(3000)
    return run_jobs([(lambda k=k, b=b: _buffer_row(k, b, rounds, options.policy)) for k, b in BUFFER_GRID],
                    options.workers)


# ==================== identify ====================

def demo_collections() -> List[FiniteCollection]:
    """Finite collections of sizes 2 through 6 with nested, overlapping and finitely different members."""
    n, ev, od = Language(universe(), "N"), Language(evens(), "evens"), Language(odds(), "odds")
    m3, m4, m6 = (Language(multiples(m), f"multiples of {m}") for m in (3, 4, 6))
    tail = Language(at_least(10), "x >= 10")
    odd0 = Language(union(odds(), finite_set([0])).with_name("odds+{0}"), "odds+{0}")
    return [
        FiniteCollection([ev, n], "demo-2"),
        FiniteCollection([n, ev, odd0], "demo-3"),
        FiniteCollection([n, ev, m4, od], "demo-4"),
        FiniteCollection([n, ev, m3, m6, od], "demo-5"),
        FiniteCollection([n, ev, od, m3, m6, tail], "demo-6"),
    ]


def _identify_row(coll: FiniteCollection, z: int, seeds: int, rounds: int,
                  base_seed: int, policy: ProbePolicy) -> Dict[str, Any]:
    gen = IncrementalIdentifier(coll, policy)
    target = coll.language(z)
    minimal = next(
        p for p, i in enumerate(gen.order, start=1)
        if almost_compare(coll.language(i).expr, target.expr, policy) is AlmostOrder.EQUIVALENT
        and is_subset(target.expr, coll.language(i).expr, policy).holds
    )
    failures = []
    for seed in range(base_seed, base_seed + seeds):
        stream = finitely_repeating_enumeration(target, 3, seed)
        state, positions = gen.initial_state(), []
        for x in stream.take(rounds):
            _, state = gen.step(state, x)
            positions.append(state)
        monotone = all(a <= b for a, b in zip(positions, positions[1:]))
        first = next((t for t, p in enumerate(positions) if p == minimal), None)
        settled = first is not None and all(p == minimal for p in positions[first:])
        final = coll.language(gen.order[positions[-1] - 1]).expr
        close = almost_compare(final, target.expr, policy) is AlmostOrder.EQUIVALENT
        if not (monotone and settled and close):
            failures.append(seed)
    return {
        "check": f"identify {coll.name} target {target.name}",
        "seeds": seeds,
        "failed_seeds": failures,
        "passed": not failures,
    }


def suite_identify(options: SuiteOptions) -> List[Dict[str, Any]]:
    rounds = options.rounds_or(400)
    jobs = [
        (lambda coll=coll, z=z: _identify_row(coll, z, 20, rounds, options.seed, options.policy))
        for coll in demo_collections() for z in coll.indices()
    ]
    return run_jobs(jobs, options.workers)


# ==================== bruteforce ====================

def suite_bruteforce(options: SuiteOptions) -> List[Dict[str, Any]]:
    ident = identification_counterexample()
    gen_inst = generation_counterexample()
    rows = []
    for inst, criterion, expected in (
        (ident, IndexCriterion.EXACT, 3 ** 9 * 3),
        (gen_inst, IndexCriterion.GENERATION, 3 ** 12 * 3),
    ):
        report = bruteforce_incremental(inst, criterion=criterion, policy=options.policy)
        rows.append({
            "check": f"bruteforce {inst.name} ({criterion.value})",
            "candidates": report.candidates_total,
            "survivors": len(report.survivors),
            "passed": report.candidates_total == expected and report.passed,
        })
    four = symbolic_four_prefix_check(ident)
    rows.append({
        "check": f"four-prefix pigeonhole {ident.name}",
        "forced_pairs": len(four.forced),
        "consistent": four.consistent,
        "passed": four.passed and len(four.forced) == 6,
    })
    for inst in (ident, gen_inst):
        sym = symbolic_three_language_check(inst)
        rows.append({
            "check": f"three-language tables {inst.name}",
            "candidates": sym.assignments_checked,
            "consistent": sym.consistent,
            "passed": sym.passed,
        })
    return rows


# ==================== scd ====================

def suite_scd(options: SuiteOptions) -> List[Dict[str, Any]]:
    rows = []
    for n in range(1, 13):
        chains = symmetric_chain_decomposition(n)
        ok = is_symmetric_chain_decomposition(n, chains) and len(chains) == comb(n, n // 2)
        rows.append({"check": f"scd n={n}", "chains": len(chains), "passed": ok})
    for n in range(1, 7):
        layer = middle_layer(n)
        ok = is_antichain(layer) and sperner_width(n) == len(layer) == max_antichain_bruteforce(n)
        rows.append({"check": f"middle layer n={n}", "width": len(layer), "passed": ok})
    return rows


# ==================== memoryless ====================

def _countable_rows(inst_name: str, coll, targets, rounds: int, seed: int,
                    policy: ProbePolicy) -> List[Dict[str, Any]]:
    gen = CountableMemorylessGenerator(coll, policy=policy)
    rows = []
    for z in targets:
        target = coll.language(z)
        bad = bad_set(gen, coll, z, 10 ** 4, policy)
        bound = set(bad_set_bound(coll, z, gen.bijection, 10 ** 4, policy))
        contained = set(bad) <= bound
        tr = run_game(gen, finitely_repeating_enumeration(target, 3, seed), target, rounds,
                      SamplingConfig(every=rounds), policy=policy)
        rows.append({
            "check": f"countable memoryless {inst_name} L_{z}",
            "bad_set": bad[:10],
            "bad_set_size": len(bad),
            "t_star": tr.t_star,
            "passed": contained and tr.t_star is not None,
        })
    return rows


def _index_adversary_rows(policy: ProbePolicy) -> List[Dict[str, Any]]:
    inst = index_pair_instance()
    rows = []
    for constant in (1, 2):
        def rule(x: int, constant=constant) -> int:
            if x % 4 == 0:
                return constant
            return 1 if x % 4 == 1 else 2
        gen = MemorylessIndexGenerator(inst.collection, rule, name=f"constant {constant} on C")
        stream = index_pair_adversary(gen, inst, policy=policy)
        tr = run_game(gen, stream, stream.target, 500, criterion=IndexCriterion.GENERATION, policy=policy)
        failures = len(tr.violations())
        rows.append({
            "check": f"index adversary vs constant {constant} on C",
            "failures": failures,
            "passed": failures >= 50,
        })
    return rows


def _element_adversary_row(policy: ProbePolicy) -> Dict[str, Any]:
    target = Language(evens(), "evens")
    gen = MemorylessElementGenerator(lambda x: x + 2, name="x+2")
    stream = element_memoryless_adversary(gen, target, policy=policy)
    tr = run_game(gen, stream, target, 200, policy=policy)
    planted = stream.planted_rounds(200)
    invalid = set(tr.violations())
    return {
        "check": "element adversary vs x+2 on evens",
        "case": stream.case,
        "planted": len(planted),
        "passed": bool(planted) and all(t in invalid for t in planted),
    }


def suite_memoryless(options: SuiteOptions) -> List[Dict[str, Any]]:
    rounds = options.rounds_or(2000)
    policy = options.policy
    threshold = length_threshold_instance()
    mixed = mixed_instance()
    rows = _countable_rows("length thresholds", threshold.collection, range(1, 6), rounds, options.seed, policy)
    rows += _countable_rows("mixed", mixed.collection, range(1, 4), rounds, options.seed, policy)

    generable = classify_single_example(index_pair_instance().collection, policy)
    rows.append({
        "check": "single example: index pair",
        "verdict": generable.describe(),
        "passed": generable.verdict is Classification.GENERABLE,
    })
    pair_coll = FiniteCollection(list(mixed.collection)[1:], "evens / odds+{0}")
    counter = classify_single_example(pair_coll, policy)
    rows.append({
        "check": "single example: evens vs odds+{0}",
        "verdict": counter.describe(),
        "passed": counter.verdict is Classification.COUNTEREXAMPLE and counter.witness == 0,
    })
    rows += _index_adversary_rows(policy)
    rows.append(_element_adversary_row(policy))
    return rows


# ==================== coding ====================

def _coding_row(coll: FiniteCollection, z: int, rounds: int, policy: ProbePolicy) -> Dict[str, Any]:
    gen = CodingGenerator(coll, policy=policy)
    target = coll.language(z)
    state = gen.initial_state()
    inputs, outputs = [], []
    decoded, increasing = True, True
    for x in canonical_enumeration(target).take(rounds):
        inputs.append(x)
        out, state = gen.step(state, x)
        increasing = increasing and (not outputs or out.value > outputs[-1])
        outputs.append(out.value)
        _, history, _ = gen.decode(state)
        decoded = decoded and history == tuple(inputs)
    indices = [gen.identifier.index_for(inputs[:s + 1]) for s in range(len(inputs))]
    stable = next(t for t in range(len(indices)) if all(i == indices[-1] for i in indices[t:]))
    fresh = all(target.contains(y) and y not in inputs[:t + 1] for t, y in enumerate(outputs) if t >= stable)
    return {
        "check": f"coding {coll.name} target {target.name}",
        "rounds": rounds,
        "largest_output_bits": outputs[-1].bit_length() if outputs else 0,
        "passed": increasing and decoded and fresh,
    }


def _cofinal_row(coll: FiniteCollection, probe: int, policy: ProbePolicy) -> Dict[str, Any]:
    books = cofinal_subsets(coll, policy=policy)
    disjoint = all(sum(1 for b in books if b.contains(x)) <= 1 for x in range(probe))
    cofinal = all(b.next_member(p) >= p for b in books for p in range(0, probe * 10, 10))
    inside = all(coll.language(i).contains(x) for i, b in enumerate(books, start=1) for x in b.take(50))
    return {
        "check": f"cofinal subsets {coll.name}",
        "passed": disjoint and cofinal and inside,
    }


def _codeword_row() -> Dict[str, Any]:
    history = tuple(range(0, 40, 3))
    code = seq_encode(history)
    pairs_ok = all(unpair(pair(u, n)) == (u, n) for u in (0, 1, 7, code) for n in (0, 1, 5, 2 ** 70))
    return {
        "check": "codeword round trip",
        "code_bits": code.bit_length(),
        "passed": seq_decode(code) == history and pairs_ok and pair(1, 1) == 4,
    }


def suite_coding(options: SuiteOptions) -> List[Dict[str, Any]]:
    rounds = options.rounds_or(20)
    coll = FiniteCollection([Language(evens(), "evens"), Language(universe(), "N")], "evens/N")
    rows = [_cofinal_row(coll, 100, options.policy), _codeword_row()]
    rows += run_jobs([(lambda z=z: _coding_row(coll, z, rounds, options.policy)) for z in (1, 2)], options.workers)
    return rows


# ==================== Registry ====================

SUITES: Dict[str, Callable[[SuiteOptions], List[Dict[str, Any]]]] = {
    "minimax": suite_minimax,
    "window": suite_window,
    "buffer": suite_buffer,
    "identify": suite_identify,
    "bruteforce": suite_bruteforce,
    "scd": suite_scd,
    "memoryless": suite_memoryless,
    "coding": suite_coding,
}


def run_suite(name: str, options: Optional[SuiteOptions] = None) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"Unknown suite '{name}'. Expected one of: {', '.join(SUITES)}")
    options = options or SuiteOptions()
    logger.info(f"Running suite {name}")
    try:
        rows = SUITES[name](options)
    except LimitGenError as e:
        logger.error(f"Suite {name} aborted: {e}")
        rows = [{"check": name, "error": str(e), "passed": False}]
    result = SuiteResult(name, rows)
    logger.info(f"Suite {name}: {len(rows) - len(result.failures)}/{len(rows)} checks passed")
    return result
