"""
Tests for Sperner widths, symmetric chain decompositions and the minimax constants.
"""

import json
from fractions import Fraction
from math import comb
from pathlib import Path

import pytest

from limitgen.combinatorics import (
    SubsetMask,
    buffer_improvement_ratio,
    chain_of,
    is_antichain,
    is_symmetric_chain_decomposition,
    max_antichain_bruteforce,
    middle_layer,
    minimax_buffer,
    minimax_memoryless,
    sperner_width,
    symmetric_chain_decomposition,
)
from limitgen.exceptions import SizeLimitError

GOLDEN = Path(__file__).parent / "golden"


class TestSubsetMask:
    def test_members(self):
        mask = SubsetMask.from_members(5, [1, 4])
        assert mask.bits == 0b01001
        assert mask.members == (1, 4)
        assert mask.size == 2
        assert 4 in mask
        assert str(mask) == "{1,4}"

    def test_subset(self):
        a = SubsetMask.from_members(4, [2])
        b = SubsetMask.from_members(4, [2, 3])
        assert a.issubset(b)
        assert not b.issubset(a)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            SubsetMask.from_members(3, [4])
        with pytest.raises(ValueError):
            SubsetMask(2, 4)


class TestSperner:
    """Largest antichains in the subset lattice."""

    def test_widths(self):
        assert [sperner_width(n) for n in range(7)] == [1, 1, 2, 3, 6, 10, 20]

    def test_middle_layer_is_antichain(self):
        for n in range(1, 8):
            layer = middle_layer(n)
            assert len(layer) == sperner_width(n)
            assert is_antichain(layer)

    def test_middle_layer_order(self):
        assert [m.members for m in middle_layer(3)] == [(1,), (2,), (3,)]

    def test_bruteforce_matches(self):
        for n in range(0, 7):
            assert max_antichain_bruteforce(n) == sperner_width(n)

    def test_bruteforce_limit(self):
        with pytest.raises(SizeLimitError):
            max_antichain_bruteforce(7)
        with pytest.raises(ValueError):
            max_antichain_bruteforce(-1)

    def test_chain_is_not_antichain(self):
        chain = [SubsetMask.from_members(3, []), SubsetMask.from_members(3, [1])]
        assert not is_antichain(chain)


class TestSymmetricChains:
    """Bracketing decomposition."""

    @pytest.mark.parametrize("n", range(0, 11))
    def test_valid_decomposition(self, n):
        chains = symmetric_chain_decomposition(n)
        assert is_symmetric_chain_decomposition(n, chains)
        assert len(chains) == comb(n, n // 2)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_golden(self, n):
        expected = [json.loads(line) for line in (GOLDEN / f"scd-{n}.jsonl").read_text().splitlines() if line]
        got = [[list(m.members) for m in chain] for chain in symmetric_chain_decomposition(n)]
        assert got == expected

    def test_chain_of(self):
        mask = SubsetMask.from_members(4, [2])
        chain = chain_of(mask)
        assert mask in chain
        assert any(chain == c for c in symmetric_chain_decomposition(4))

    def test_broken_decomposition_detected(self):
        chains = symmetric_chain_decomposition(3)
        assert not is_symmetric_chain_decomposition(3, chains[1:])

    def test_limits(self):
        with pytest.raises(ValueError):
            symmetric_chain_decomposition(-1)
        with pytest.raises(SizeLimitError):
            symmetric_chain_decomposition(21)


class TestMinimaxConstants:
    """Closed forms for the best guaranteed densities."""

    def test_memoryless(self):
        assert minimax_memoryless(1) == 1
        assert minimax_memoryless(2) == 1
        assert minimax_memoryless(3) == Fraction(1, 2)
        assert minimax_memoryless(5) == Fraction(1, 6)
        assert minimax_memoryless(6) == Fraction(1, 10)

    def test_buffer(self):
        assert minimax_buffer(5, 0) == minimax_memoryless(5)
        assert minimax_buffer(5, 1) == Fraction(1, 3)
        assert minimax_buffer(5, 2) == Fraction(1, 2)
        assert minimax_buffer(5, 3) == 1
        assert minimax_buffer(6, 4) == 1

    def test_improvement_ratio(self):
        assert buffer_improvement_ratio(5, 1) == 2
        assert buffer_improvement_ratio(6, 2) == Fraction(10, 3)

    def test_invalid(self):
        with pytest.raises(ValueError):
            minimax_memoryless(0)
        with pytest.raises(ValueError):
            minimax_buffer(3, -1)
