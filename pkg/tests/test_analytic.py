import math

import numpy as np
import pytest

import pxpfsa as p
from pxpfsa.analytic import _q_profile
from pxpfsa.errors import DomainError, FitError


def test_beta_vacuum_values():
    assert p.beta_vacuum(1, 14) == pytest.approx(math.sqrt(14), abs=1e-12)
    assert p.beta_vacuum(2, 14) == pytest.approx(math.sqrt(22), abs=1e-12)
    assert p.beta_vacuum(3, 14) == pytest.approx(math.sqrt(270 / 11), abs=1e-12)
    with pytest.raises(DomainError):
        p.beta_vacuum(4, 14)
    with pytest.raises(DomainError):
        p.beta_vacuum(1, 13)


def test_beta_vacuum_perturbed_reduces_to_bare():
    for L in (8, 14, 20):
        assert p.beta_vacuum_perturbed(2, L, 0.0) == pytest.approx(
            p.beta_vacuum(2, L), abs=1e-12)
        assert p.beta_vacuum_perturbed(3, L, 0.0) == pytest.approx(
            p.beta_vacuum(3, L), abs=1e-12)
    assert p.beta_vacuum_perturbed(2, 14, 0.31) == pytest.approx(
        math.sqrt(23.3361), abs=1e-9)


def test_error3_vacuum_values():
    assert p.error3_vacuum(0.0, 14) == pytest.approx(54 / 990, abs=1e-14)
    for L in (8, 12, 16, 100):
        assert p.error3_vacuum(0.0, L) == pytest.approx(
            6 * (L - 5) / (L ** 3 - 12 * L ** 2 + 47 * L - 60), abs=1e-14)
    assert p.error3_vacuum(0.3, 10 ** 6) < 1e-5


def test_error3_vacuum_has_interior_minimum():
    for L in (8, 12, 18, 100):
        hs = np.linspace(0.0, 1.0, 201)
        vals = [p.error3_vacuum(h, L) for h in hs]
        best = int(np.argmin(vals))
        assert 0 < best < len(hs) - 1


def test_delta3_z2_values():
    assert p.delta3_z2(6) == 0.0
    assert p.delta3_z2(8) == pytest.approx(16 / 480, abs=1e-14)
    assert p.delta3_z2(10 ** 6) < 1e-8
    # rises from six sites to eight, decreases afterwards
    vals = [p.delta3_z2(L) for L in range(6, 20, 2)]
    assert vals[0] == 0.0 and vals[1] > vals[0]
    assert all(a > b for a, b in zip(vals[1:], vals[2:]))


def test_beta3_z2_values():
    assert p.beta3_z2(6) == pytest.approx(2.0, abs=1e-12)
    assert p.beta3_z2(8) == pytest.approx(math.sqrt(6 + 2 / 3), abs=1e-12)


@pytest.mark.parametrize("L", range(8, 20, 2))
def test_beta3_z2_matches_numerical_chain(L):
    basis = p.enumerate_basis(L)
    ladder = p.ladder_split(basis, p.ModelConfig(L, "z2"), "z2")
    data = p.fsa(ladder, p.special_state(basis, "z2"))
    assert data.betas[2] == pytest.approx(p.beta3_z2(L), abs=1e-10)
    assert data.errors_sq[2] == pytest.approx(p.delta3_z2(L), abs=1e-10)


def test_su2_beta():
    assert p.su2_beta(1, 4) == 2.0
    assert p.su2_beta(2, 4) == pytest.approx(math.sqrt(6), abs=1e-14)
    for n in range(1, 11):
        assert p.su2_beta(n, 10) == pytest.approx(p.su2_beta(11 - n, 10), abs=1e-14)


def test_qnumber():
    assert p.qnumber(5, 1.0) == 5.0
    assert p.qnumber(5, 1.0 + 1e-12) == 5.0
    assert p.qnumber(2, 2.0) == pytest.approx(2.5, abs=1e-14)
    for x in (0.5, 1.0, 3.0, 7.2):
        assert p.qnumber(x, 0.7) == pytest.approx(p.qnumber(x, 1 / 0.7), abs=1e-12)
    with pytest.raises(DomainError):
        p.qnumber(2, -1.0)


def test_fit_q_recovers_su2():
    betas = [p.su2_beta(n, 10) for n in range(1, 11)]
    fit = p.fit_q(betas)
    assert abs(fit.q - 1.0) < 1e-3
    assert fit.residual < 1e-8
    assert fit.alpha == pytest.approx(1.0, abs=1e-6)
    assert fit.j == 5.0


@pytest.mark.parametrize("q_true", [0.5, 0.65, 0.85, 1.0])
def test_fit_q_round_trip(q_true):
    betas = 1.3 * _q_profile(q_true, np.arange(1, 13), 12)
    fit = p.fit_q(betas)
    assert abs(fit.q - q_true) < 1e-4 or abs(1 / fit.q - q_true) < 1e-4
    assert fit.residual < 1e-8
    assert fit.alpha == pytest.approx(1.3, abs=1e-5)


def test_fit_q_degenerate_input():
    with pytest.raises(FitError):
        p.fit_q(np.zeros(8))
    with pytest.raises(FitError):
        p.fit_q([1.0, 2.0, 0, 0, 0, 0])  # fewer than three non-zero entries


def test_fit_q_l12_chain_regression():
    """Fits of the forward-chain norms for the optimally and weakly perturbed
    even/odd models at twelve sites; frozen from this implementation and in
    line with the deformation parameters quoted for these couplings."""
    basis = p.enumerate_basis(12)
    z2 = p.special_state(basis, "z2")
    got = {}
    for lam in (0.05, 0.108):
        cfg = p.ModelConfig(12, "z2", {"z2pert": lam})
        data = p.fsa(p.ladder_split(basis, cfg, "z2"), z2)
        got[lam] = p.fit_q(data.betas).q
    assert got[0.05] == pytest.approx(0.856, abs=5e-3)
    assert got[0.108] == pytest.approx(0.964, abs=5e-3)


@pytest.mark.parametrize("L", [8, 10, 12, 14, 16, 18])
@pytest.mark.parametrize("h", [0.0, 0.1, 0.31, 0.43, 1.0])
def test_vacuum_oracle_agreement_grid(L, h):
    basis = p.enumerate_basis(L)
    terms = {"sigma3": h} if h else {}
    ladder = p.ladder_split(basis, p.ModelConfig(L, "vacuum", terms), "vacuum")
    data = p.fsa(ladder, p.special_state(basis, "vacuum"))
    if h == 0.0:
        assert data.betas[0] == pytest.approx(p.beta_vacuum(1, L), abs=1e-10)
        assert data.betas[1] == pytest.approx(p.beta_vacuum(2, L), abs=1e-10)
        assert data.betas[2] == pytest.approx(p.beta_vacuum(3, L), abs=1e-10)
    if L >= 8:
        assert data.betas[1] == pytest.approx(p.beta_vacuum_perturbed(2, L, h), abs=1e-10)
        assert data.betas[2] == pytest.approx(p.beta_vacuum_perturbed(3, L, h), abs=1e-10)
        assert data.errors_sq[2] == pytest.approx(p.error3_vacuum(h, L), abs=1e-8)
