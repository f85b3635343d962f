"""
Tests for memoryless, window, buffer, incremental and coding generators.
"""

import pytest

from limitgen.adversaries import length_threshold_instance, mixed_instance, sperner_hard_instance, window_hard_instance
from limitgen.builtins import at_least, evens, multiples, odds
from limitgen.exceptions import ConfigError, DecodeFailureError, DuplicateInWindowError, SizeLimitError
from limitgen.generators import (
    BufferGenerator,
    CanonicalIntersectionGenerator,
    CodingGenerator,
    CountableMemorylessGenerator,
    FullInformationIdentifier,
    GeneratorFactory,
    GeneratorKind,
    GeneratorOutput,
    IncrementalIdentifier,
    MemorylessElementGenerator,
    OutputMode,
    ThresholdElementGenerator,
    WindowGenerator,
    WindowRule,
    cofinal_subsets,
    pair,
    seq_decode,
    seq_encode,
    threshold_element_step,
    topological_order,
    unpair,
)
from limitgen.languages import FiniteCollection, Language
from limitgen.sets import StructuredSet, Verdict, is_subset, set_equal, universe


def _equal(a, b) -> bool:
    return set_equal(a, b) is Verdict.TRUE


class TestOutputs:
    def test_describe(self):
        assert GeneratorOutput.of_index(3).describe() == "L_3"
        assert GeneratorOutput.of_element(17).describe() == "17"
        assert GeneratorOutput.of_set(evens()).describe() == "evens"

    def test_mode_from_string(self):
        assert OutputMode.from_string("SET") is OutputMode.SET
        with pytest.raises(ValueError):
            OutputMode.from_string("bag")


class TestCanonicalIntersection:
    """Memoryless set generator on finite collections."""

    def test_sperner_outputs_single_cells(self):
        inst = sperner_hard_instance(4)
        gen = CanonicalIntersectionGenerator(inst.collection)
        system = inst.certificate.system
        for x in range(12):
            out, state = gen.step(gen.initial_state(), x)
            assert state is None
            cell = StructuredSet(system, frozenset([system.label(x)]))
            assert _equal(out.value, cell)

    def test_finite_intersection_falls_back_to_universe(self):
        gen = CanonicalIntersectionGenerator(mixed_instance().collection)
        out, _ = gen.step(None, 0)
        assert _equal(out.value, universe())
        out, _ = gen.step(None, 2)
        assert _equal(out.value, evens())

    def test_run(self):
        coll = FiniteCollection([Language(universe(), "N"), Language(evens(), "evens")])
        outputs = CanonicalIntersectionGenerator(coll).run([1, 2])
        assert _equal(outputs[0].value, universe())
        assert _equal(outputs[1].value, evens())

    def test_hypothesis_rejected_for_set_mode(self):
        gen = CanonicalIntersectionGenerator(mixed_instance().collection)
        with pytest.raises(TypeError):
            gen.hypothesis(1)


class TestCountableMemoryless:
    """Memoryless generator over countable collections."""

    def test_length_thresholds(self):
        coll = length_threshold_instance().collection
        gen = CountableMemorylessGenerator(coll)
        out, _ = gen.step(None, 5)
        # languages 1..5 contain 5 and bijection(5) = 6 caps the prefix
        assert _equal(out.value, at_least(5))

    def test_bijection_caps_prefix(self):
        coll = length_threshold_instance().collection
        gen = CountableMemorylessGenerator(coll, bijection=lambda x: 2)
        out, _ = gen.step(None, 9)
        assert _equal(out.value, at_least(2))

    def test_stops_before_finite_meet(self):
        gen = CountableMemorylessGenerator(mixed_instance().collection, bijection=lambda x: 3)
        out, _ = gen.step(None, 0)
        # J_2(0) = evens is infinite, J_3(0) = {0} is not
        assert _equal(out.value, evens())

    def test_invalid_bijection(self):
        gen = CountableMemorylessGenerator(mixed_instance().collection, bijection=lambda x: 0)
        with pytest.raises(ValueError):
            gen.step(None, 1)


class TestElementGenerators:
    def test_memoryless_rule(self):
        gen = MemorylessElementGenerator(lambda x: x + 2, name="x+2")
        assert [o.value for o in gen.run([0, 4])] == [2, 6]
        assert gen.mode is OutputMode.ELEMENT

    def test_threshold_step(self):
        assert threshold_element_step(3, frozenset([3, 4, 6])) == 5

    def test_threshold_generator(self):
        gen = ThresholdElementGenerator()
        outputs = [o.value for o in gen.run([7, 5, 6, 8])]
        assert outputs == [8, 6, 8, 9]
        assert gen.kind is GeneratorKind.THRESHOLD_ELEMENT


class TestWindowGenerator:
    """Sliding-window set generators."""

    def setup_method(self):
        self.inst = window_hard_instance(3)

    def test_last_element_matches_memoryless(self):
        gen = WindowGenerator(self.inst.collection, 2, WindowRule.LAST_ELEMENT)
        plain = CanonicalIntersectionGenerator(self.inst.collection)
        outputs = gen.run([2, 4, 0])
        for x, out in zip([2, 4, 0], outputs):
            assert _equal(out.value, plain.step(None, x)[0].value)

    def test_intersect_window(self):
        gen = WindowGenerator(self.inst.collection, 2, WindowRule.INTERSECT_WINDOW)
        # 2 sits in A_1 and 4 in A_2; only K holds both
        out = gen.output_for_window([2, 4])
        assert _equal(out, universe())
        assert is_subset(gen.output_for_window([0, 2]), self.inst.collection.language(2).expr).holds

    def test_window_keeps_last_entries(self):
        gen = WindowGenerator(self.inst.collection, 2)
        state = gen.initial_state()
        for x in (1, 2, 3):
            _, state = gen.step(state, x)
        assert state.entries == (2, 3)

    def test_duplicate_rejected(self):
        gen = WindowGenerator(self.inst.collection, 3)
        state = gen.initial_state()
        _, state = gen.step(state, 5)
        with pytest.raises(DuplicateInWindowError):
            gen.step(state, 5)

    def test_width_one_accepts_repeats(self):
        gen = WindowGenerator(self.inst.collection, 1)
        plain = CanonicalIntersectionGenerator(self.inst.collection)
        outputs = gen.run([5, 5])
        for out in outputs:
            assert _equal(out.value, plain.step(None, 5)[0].value)

    def test_evicted_entry_may_return(self):
        gen = WindowGenerator(self.inst.collection, 2)
        state = gen.initial_state()
        for x in (1, 2):
            _, state = gen.step(state, x)
        # 1 leaves the window as it comes back
        _, state = gen.step(state, 1)
        assert state.entries == (2, 1)
        with pytest.raises(DuplicateInWindowError):
            gen.step(state, 1)

    def test_output_for_window_checks_width(self):
        gen = WindowGenerator(self.inst.collection, 2)
        with pytest.raises(ValueError):
            gen.output_for_window([1])

    def test_rule_names(self):
        assert WindowRule.from_string("intersect_window") is WindowRule.INTERSECT_WINDOW
        with pytest.raises(ValueError):
            WindowRule.from_string("median")

    def test_invalid_width(self):
        with pytest.raises(ValueError):
            WindowGenerator(self.inst.collection, 0)


class TestBufferGenerator:
    """Greedy buffer of informative inputs."""

    def setup_method(self):
        self.inst = sperner_hard_instance(5)
        self.coll = self.inst.collection

    def test_zero_capacity_is_memoryless(self):
        gen = BufferGenerator(self.coll, 0)
        plain = CanonicalIntersectionGenerator(self.coll)
        state = gen.initial_state()
        for x in range(10):
            out, state = gen.step(state, x)
            assert _equal(out.value, plain.step(None, x)[0].value)
        assert state.stored == ()

    def test_stores_informative_inputs(self):
        gen = BufferGenerator(self.coll, 2)
        state = gen.initial_state()
        for x in range(30):
            _, state = gen.step(state, x)
        assert len(state.stored) == 2
        assert 1 in state.residual
        holding = {i for i in self.coll.indices() if all(self.coll.language(i).contains(y) for y in state.stored)}
        assert state.residual == holding

    def test_residual_only_shrinks(self):
        gen = BufferGenerator(self.coll, 3)
        state = gen.initial_state()
        previous = state.residual
        for x in range(40):
            _, state = gen.step(state, x)
            assert state.residual <= previous
            previous = state.residual

    def test_negative_capacity(self):
        with pytest.raises(ValueError):
            BufferGenerator(self.coll, -1)


class TestIncrementalIdentifier:
    """Single-index identification in topological order."""

    def setup_method(self):
        self.n = Language(universe(), "N")
        self.ev = Language(evens(), "evens")
        self.m4 = Language(multiples(4), "fours")
        self.coll = FiniteCollection([self.n, self.ev, self.m4], "nested")

    def test_topological_order(self):
        assert topological_order(self.coll) == [3, 2, 1]

    def test_moves_forward_only(self):
        gen = IncrementalIdentifier(self.coll)
        outputs = [o.value for o in gen.run([0, 4, 2, 8, 1, 6])]
        assert outputs == [3, 3, 2, 2, 1, 1]

    def test_full_information_agrees(self):
        xs = [0, 4, 2, 8, 1, 6]
        incremental = [o.value for o in IncrementalIdentifier(self.coll).run(xs)]
        full = [o.value for o in FullInformationIdentifier(self.coll).run(xs)]
        assert incremental == full

    def test_index_for(self):
        gen = IncrementalIdentifier(self.coll)
        assert gen.index_for([0, 2]) == 2
        assert gen.hypothesis(2) is self.ev


class TestCoding:
    """Pairing, sequence codes and the one-word generator."""

    def test_pair_values(self):
        assert pair(0, 0) == 0
        assert pair(1, 1) == 4
        assert unpair(4) == (1, 1)

    def test_sequence_codes(self):
        assert seq_encode(()) == 0
        assert seq_decode(seq_encode((3, 0, 5))) == (3, 0, 5)

    def test_negative_inputs(self):
        with pytest.raises(ValueError):
            pair(-1, 0)
        with pytest.raises(ValueError):
            seq_decode(-1)

    def test_cofinal_subsets(self):
        coll = FiniteCollection([Language(evens(), "evens"), Language(odds(), "odds")])
        books = cofinal_subsets(coll)
        assert all(coll.language(i).contains(x) for i, b in enumerate(books, start=1) for x in b.take(30))
        assert not any(books[0].contains(x) and books[1].contains(x) for x in range(200))
        assert all(b.next_member(1000) >= 1000 for b in books)

    def test_coding_generator_short_run(self):
        coll = FiniteCollection([Language(evens(), "evens"), Language(universe(), "N")], "evens/N")
        gen = CodingGenerator(coll, rounds_cap=6)
        state = gen.initial_state()
        xs = [0, 2, 4, 6]
        previous = state
        for t, x in enumerate(xs, start=1):
            out, state = gen.step(state, x)
            assert out.value == state
            assert out.value > previous
            assert out.value > x
            _, history, _ = gen.decode(state)
            assert history == tuple(xs[:t])
            previous = out.value
        assert evens().contains(state)

    def test_round_cap(self):
        coll = FiniteCollection([Language(evens(), "evens"), Language(universe(), "N")])
        gen = CodingGenerator(coll, rounds_cap=2)
        state = gen.initial_state()
        for x in (0, 2):
            _, state = gen.step(state, x)
        with pytest.raises(SizeLimitError):
            gen.step(state, 4)

    def test_decode_rejects_non_codewords(self):
        coll = FiniteCollection([Language(evens(), "evens"), Language(odds(), "odds")])
        gen = CodingGenerator(coll)
        books = gen.codebooks
        stray = next(x for x in range(1000) if not any(b.contains(x) for b in books))
        with pytest.raises(DecodeFailureError):
            gen.decode(stray)

    @pytest.mark.slow
    def test_coding_generator_longer_run(self):
        coll = FiniteCollection([Language(evens(), "evens"), Language(universe(), "N")], "evens/N")
        gen = CodingGenerator(coll)
        state = gen.initial_state()
        xs = list(range(0, 20, 2))
        for x in xs:
            out, state = gen.step(state, x)
        _, history, _ = gen.decode(state)
        assert history == tuple(xs)
        assert evens().contains(state)


class TestGeneratorFactory:
    def setup_method(self):
        self.coll = sperner_hard_instance(3).collection

    def test_kinds(self):
        assert isinstance(GeneratorFactory.create({"kind": "canonical"}, self.coll), CanonicalIntersectionGenerator)
        window = GeneratorFactory.create({"kind": "window", "w": 3, "strategy": "intersect"}, self.coll)
        assert window.width == 3 and window.rule is WindowRule.INTERSECT_WINDOW
        assert GeneratorFactory.create({"kind": "buffer", "b": 2}, self.coll).capacity == 2
        assert isinstance(GeneratorFactory.create({"kind": "identifier"}, self.coll), IncrementalIdentifier)
        assert isinstance(GeneratorFactory.create({"kind": "threshold_element"}, self.coll), ThresholdElementGenerator)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            GeneratorFactory.create({"kind": "oracle"}, self.coll)
