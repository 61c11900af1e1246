import numpy as np
import pytest

import pxpfsa as p
from pxpfsa.errors import CapacityError, InputError


def two_level_flip():
    h = p.SparseHamiltonian.from_dense([[0.0, 1.0], [1.0, 0.0]])
    psi0 = np.array([1.0, 0.0])
    return h, psi0


def test_eigendecompose_reconstruction_and_symmetric_spectrum():
    basis = p.enumerate_basis(4)
    h = p.build_pxp(basis)
    eig = p.eigendecompose(h)
    dense = h.to_dense()
    rebuilt = eig.eigenvectors @ np.diag(eig.eigenvalues) @ eig.eigenvectors.T
    assert np.abs(rebuilt - dense).max() < 1e-8 * np.abs(dense).max()
    assert np.abs(eig.eigenvectors.T @ eig.eigenvectors - np.eye(eig.dim)).max() < 1e-10
    # particle-hole symmetry: spectrum symmetric about zero
    assert np.abs(np.sort(eig.eigenvalues) + np.sort(-eig.eigenvalues)[::-1]).max() < 1e-10
    assert abs(eig.eigenvalues.sum()) < 1e-8


def test_eigendecompose_capacity_guard():
    big = p.SparseHamiltonian.from_dense(np.zeros((2, 2)))
    object.__setattr__(big.matrix, "_shape", (20000, 20000))
    with pytest.raises(CapacityError):
        p.eigendecompose(big)


def test_return_probability_two_level():
    h, psi0 = two_level_flip()
    times = p.time_grid(0.01, 6.0)
    r = p.return_probability(p.eigendecompose(h), psi0, times)
    assert r.values[0] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(r.values - np.cos(times) ** 2).max() < 1e-10


def test_return_probability_unit_start_everywhere(eig_cache):
    cfg = p.ModelConfig(10, "z2", {"z2pert": 0.108})
    basis = p.enumerate_basis(10)
    eig = eig_cache(cfg)
    z2 = p.special_state(basis, "z2")
    times = p.time_grid(0.05, 20.0)
    r = p.return_probability(eig, z2, times)
    assert r.values[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(r.values <= 1 + 1e-12)


def test_optimal_perturbation_strengthens_revival(eig_cache):
    basis = p.enumerate_basis(10)
    z2 = p.special_state(basis, "z2")
    times = p.time_grid(0.02, 10.0)
    bare = p.return_probability(eig_cache(p.ModelConfig(10, "z2")), z2, times)
    opt = p.return_probability(
        eig_cache(p.ModelConfig(10, "z2", {"z2pert": 0.108})), z2, times)
    assert p.revival_height(opt) > p.revival_height(bare)


def test_spread_complexity_two_level():
    h, psi0 = two_level_flip()
    times = p.time_grid(0.01, 6.0)
    basis_vectors = np.eye(2)
    c, leak = p.spread_complexity(p.eigendecompose(h), psi0, basis_vectors, times)
    assert c.values[0] == pytest.approx(0.0, abs=1e-12)
    assert np.abs(c.values - np.sin(times) ** 2).max() < 1e-10
    assert np.abs(leak.values).max() < 1e-10


def test_spread_complexity_paramagnet_zero_leakage():
    ladder, v0 = p.free_paramagnet(6)
    h = ladder.total()
    data = p.fsa(ladder, v0)
    eig = p.eigendecompose(h)
    times = p.time_grid(0.05, 15.0)
    c, leak = p.spread_complexity(eig, v0, data.vectors, times)
    assert np.abs(leak.values).max() < 1e-8
    assert np.all(c.values >= -1e-12)
    assert np.all(c.values <= data.closed_after - 1 + 1e-9)


def test_spread_complexity_z3exact_zero_leakage(eig_cache):
    cfg = p.ModelConfig(12, "z3", {"z3pert1": -1.0})
    basis = p.enumerate_basis(12)
    ladder = p.ladder_split(basis, cfg, "z3exact")
    z3 = p.special_state(basis, "z3")
    data = p.fsa(ladder, z3)
    eig = eig_cache(cfg)
    times = p.time_grid(0.05, 15.0)
    c, leak = p.spread_complexity(eig, z3, data.vectors, times)
    assert np.abs(leak.values).max() < 1e-8
    assert np.all(c.values <= data.closed_after - 1 + 1e-9)


def test_spread_complexity_rejects_bad_basis():
    h, psi0 = two_level_flip()
    eig = p.eigendecompose(h)
    with pytest.raises(InputError):
        p.spread_complexity(eig, psi0, np.array([[1.0, 0.0], [1.0, 0.0]]), [0.0, 1.0])
    with pytest.raises(InputError):
        p.spread_complexity(eig, np.array([0.0, 1.0]), np.eye(2), [0.0, 1.0])


def test_fsa_complexity_bounded(eig_cache):
    cfg = p.ModelConfig(10, "z2", {"z2pert": 0.108})
    basis = p.enumerate_basis(10)
    ladder = p.ladder_split(basis, cfg, "z2")
    z2 = p.special_state(basis, "z2")
    data = p.fsa(ladder, z2)
    c, _ = p.spread_complexity(eig_cache(cfg), z2, data.vectors, p.time_grid(0.05, 30.0))
    assert np.all(c.values <= data.closed_after - 1 + 1e-9)


def test_unitarity(eig_cache):
    cfg = p.ModelConfig(10, "z2")
    basis = p.enumerate_basis(10)
    eig = eig_cache(cfg)
    z2 = p.special_state(basis, "z2")
    from pxpfsa.dynamics import _evolved_states
    states = _evolved_states(eig, z2, np.array([0.0, 1.7, 13.9]))
    norms = np.linalg.norm(states, axis=0)
    assert np.abs(norms - 1.0).max() < 1e-10


def test_expectation_series_constants(eig_cache):
    cfg = p.ModelConfig(8, "z2")
    basis = p.enumerate_basis(8)
    eig = eig_cache(cfg)
    z2 = p.special_state(basis, "z2")
    times = p.time_grid(0.1, 5.0)
    ident = p.SparseHamiltonian.from_dense(np.eye(basis.dim))
    ones = p.expectation_series(eig, z2, ident, times)
    assert np.abs(ones.values - 1.0).max() < 1e-10
    h = p.assemble(basis, cfg)
    energy = p.expectation_series(eig, z2, h, times)
    assert np.abs(energy.values - energy.values[0]).max() < 1e-10
    dens = p.expectation_series(eig, p.special_state(basis, "vacuum"),
                                p.up_density(basis), times)
    assert dens.values[0] == pytest.approx(0.0, abs=1e-12)


def test_diagonal_ensemble_identities(eig_cache):
    cfg = p.ModelConfig(8, "z2")
    basis = p.enumerate_basis(8)
    eig = eig_cache(cfg)
    z2 = p.special_state(basis, "z2")
    ident = p.SparseHamiltonian.from_dense(np.eye(basis.dim))
    assert p.diagonal_ensemble(eig, z2, ident) == pytest.approx(1.0, abs=1e-10)
    h = p.assemble(basis, cfg)
    expected_energy = float(z2.amplitudes @ h.apply(z2.amplitudes))
    assert p.diagonal_ensemble(eig, z2, h) == pytest.approx(expected_energy, abs=1e-10)


def test_diagonal_ensemble_matches_long_time_average():
    # two-level system with an incommensurate splitting: time average of the
    # occupation converges to the diagonal-ensemble value
    h = p.SparseHamiltonian.from_dense([[0.3, 1.0], [1.0, -0.2]])
    eig = p.eigendecompose(h)
    psi0 = np.array([1.0, 0.0])
    obs = p.SparseHamiltonian.from_dense([[1.0, 0.0], [0.0, 0.0]])
    times = np.linspace(100.0, 200.0, 20001)
    series = p.expectation_series(eig, psi0, obs, times)
    assert np.mean(series.values) == pytest.approx(
        p.diagonal_ensemble(eig, psi0, obs), abs=1e-2)


def test_complexity_convergence_table(eig_cache):
    basis = p.enumerate_basis(10)
    z2 = p.special_state(basis, "z2")
    times = np.arange(0.0, 20.0, 0.5)
    cfg = p.ModelConfig(10, "z2", {"z2pert": 0.108})
    table = p.complexity_convergence(p.assemble(basis, cfg), z2, [12, 14, 20],
                                     times, eig=eig_cache(cfg))
    assert table.complexity.shape == (3, len(times))
    # complexity grows monotonically with chain length (added non-negative terms)
    assert np.all(np.diff(table.complexity, axis=0) >= -1e-12)
    # near closure nothing changes at the optimal coupling ...
    assert table.max_successive_diff.max() < 5e-3
    bare = p.complexity_convergence(p.assemble(basis, p.ModelConfig(10, "z2")),
                                    z2, [12, 14, 20], times,
                                    eig=eig_cache(p.ModelConfig(10, "z2")))
    # ... while the bare chain is far from converged at the same lengths
    assert bare.max_successive_diff.max() > 10 * table.max_successive_diff.max()


def test_cross_correlation_identities():
    t = np.arange(8.0)
    a = p.TimeSeries(t, [1.0, 0, 0, 0, 0, 0, 0, 0])
    lags, raw, _ = p.cross_correlation(a, a, 3)
    assert raw[list(lags).index(0)] == 1.0
    assert all(raw[i] == 0.0 for i in range(len(lags)) if lags[i] != 0)

    rng = np.random.default_rng(3)
    x = p.TimeSeries(t, rng.standard_normal(8))
    y = p.TimeSeries(t, rng.standard_normal(8))
    lags, sxy, _ = p.cross_correlation(x, y, 5)
    _, syx, _ = p.cross_correlation(y, x, 5)
    assert np.abs(sxy - syx[::-1]).max() < 1e-12

    tt = np.arange(0, 20, 0.1)
    s = p.TimeSeries(tt, np.sin(tt))
    lags, raw, norm = p.cross_correlation(s, s, 30)
    assert lags[np.argmax(raw)] == 0
    assert norm[np.argmax(raw)] == pytest.approx(1.0, abs=1e-12)


def test_cross_correlation_grid_mismatch():
    a = p.TimeSeries(np.arange(4.0), np.ones(4))
    b = p.TimeSeries(np.arange(4.0) + 0.5, np.ones(4))
    with pytest.raises(InputError):
        p.cross_correlation(a, b, 2)


def test_lanczos_propagated_return_probability_matches_dense(eig_cache):
    cfg = p.ModelConfig(10, "z2", {"z2pert": 0.05})
    basis = p.enumerate_basis(10)
    h = p.assemble(basis, cfg)
    z2 = p.special_state(basis, "z2")
    times = p.time_grid(0.02, 12.0)
    dense = p.return_probability(eig_cache(cfg), z2, times)
    fast = p.return_probability_lanczos(h, z2, times)
    assert np.abs(dense.values - fast.values).max() < 1e-9


def test_complexity_maxima_meet_fidelity_minima_at_optimal_coupling(eig_cache):
    cfg = p.ModelConfig(18, "z2", {"z2pert": 0.108})
    basis = p.enumerate_basis(18)
    eig = eig_cache(cfg)
    z2 = p.special_state(basis, "z2")
    ladder = p.ladder_split(basis, cfg, "z2")
    chain = p.fsa(ladder, z2)
    times = p.time_grid(0.02, 6.0)
    r = p.return_probability(eig, z2, times)
    c, _ = p.spread_complexity(eig, z2, chain.vectors, times)
    # the fidelity minimum is a probability floor (R pinned at ~0 over a
    # window); the first complexity peak must sit within 0.3 of that region
    t_max_c = times[np.argmax(c.values)]
    floor_times = times[r.values <= r.values.min() + 1e-9]
    assert np.abs(floor_times - t_max_c).min() < 0.3
    # and the peak exhausts the chain: depth closed_after - 1 is reached
    assert c.values.max() == pytest.approx(chain.closed_after - 1, abs=0.1)
