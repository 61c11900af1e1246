import numpy as np
import pytest

import pxpfsa as p
from pxpfsa.errors import ConfigurationError, SizeError

from oracles import brute_force_codes, brute_force_codes_vectorized, lucas_numbers


@pytest.mark.parametrize("L,dim", [(4, 7), (6, 18), (18, 5778)])
def test_dimensions_match_brute_force(L, dim):
    basis = p.enumerate_basis(L)
    assert basis.dim == dim
    assert basis.states.tolist() == brute_force_codes(L)


@pytest.mark.parametrize("L", range(3, 15))
def test_enumeration_equals_small_brute_force(L):
    assert p.enumerate_basis(L).states.tolist() == brute_force_codes(L)


def test_dimensions_follow_lucas_sequence():
    lucas = lucas_numbers(20)
    for L in range(3, 21):
        assert p.enumerate_basis(L).dim == lucas[L]


def test_states_sorted_and_index_inverse():
    basis = p.enumerate_basis(10)
    states = basis.states
    assert np.all(np.diff(states) > 0)
    for i in (0, 3, basis.dim - 1):
        assert basis.index_of(int(states[i])) == i


@pytest.mark.parametrize("L", [2, 29, 0, -4])
def test_size_guard(L):
    with pytest.raises(SizeError):
        p.enumerate_basis(L)


def test_configuration_rejects_adjacent_ups():
    with pytest.raises(ConfigurationError):
        p.SpinConfiguration(0b0011, 4)
    with pytest.raises(ConfigurationError):
        p.SpinConfiguration(0b1001, 4)  # cyclic adjacency across the seam


def test_special_states():
    b4 = p.enumerate_basis(4)
    assert p.special_state(b4, "vacuum").amplitudes[b4.index_of(0)] == 1.0
    z2 = p.special_state(b4, "z2")
    assert z2.amplitudes[b4.index_of(0b0101)] == 1.0
    assert z2.norm() == 1.0
    b6 = p.enumerate_basis(6)
    z3 = p.special_state(b6, "z3")
    assert z3.amplitudes[b6.index_of(0b001001)] == 1.0
    z2p = p.special_state(b4, "z2prime")
    assert z2p.amplitudes[b4.index_of(0b1010)] == 1.0


def test_special_state_guards():
    b5 = p.enumerate_basis(5)
    with pytest.raises(ConfigurationError):
        p.special_state(b5, "z2")
    with pytest.raises(ConfigurationError):
        p.special_state(p.enumerate_basis(4), "z3")
    with pytest.raises(ConfigurationError):
        p.special_state(b5, "neel")


def test_translate():
    c = p.SpinConfiguration(0b0101, 4)
    assert p.translate(c, 1).code == 0b1010
    vac = p.SpinConfiguration(0, 4)
    assert p.translate(vac, 3).code == 0
    z3 = p.SpinConfiguration(0b100100, 6)
    assert p.translate(z3, 3).code == 0b100100
    # rotation by L is the identity
    assert p.translate(c, 4).code == c.code


def test_translate_preserves_membership_and_popcount():
    basis = p.enumerate_basis(8)
    for code in basis.states.tolist():
        for shift in (1, 3, 7):
            moved = p.translate(p.SpinConfiguration(code, 8), shift)
            assert basis.index_of(moved.code) >= 0
            assert moved.popcount() == int(code).bit_count()


def test_hamming_from_vacuum():
    assert p.hamming_from_vacuum(p.SpinConfiguration(0, 4)) == 0
    assert p.hamming_from_vacuum(p.SpinConfiguration(0b0101, 4)) == 2
    assert p.hamming_from_vacuum(p.SpinConfiguration(0b100100, 6)) == 2


def test_sector_counts_closed_forms():
    assert p.count_sector(p.enumerate_basis(8), 2) == 8 * 5 // 2
    assert p.count_sector(p.enumerate_basis(12), 3) == 12 * 8 * 7 // 6
    assert p.count_sector(p.enumerate_basis(8), 0) == 1
    for L in range(5, 21):
        basis = p.enumerate_basis(L)
        assert p.count_sector(basis, 2) == L * (L - 3) // 2
        if L >= 7:
            assert p.count_sector(basis, 3) == L * (L - 4) * (L - 5) // 6


@pytest.mark.parametrize("L", range(3, 21))
def test_sector_counts_sum_to_dimension(L):
    basis = p.enumerate_basis(L)
    total = sum(p.count_sector(basis, k) for k in range(L // 2 + 1))
    assert total == basis.dim == len(brute_force_codes_vectorized(L))


def test_from_bits_round_trip():
    c = p.SpinConfiguration.from_bits([1, 0, 1, 0, 0, 0])
    assert c.code == 0b000101
    assert c.bits == (1, 0, 1, 0, 0, 0)
    assert str(c) == "000101"
