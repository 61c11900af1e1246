"""Exact unitary dynamics and Krylov-space diagnostics.

Time evolution goes through a dense eigendecomposition (exact and simple at
desk scale, guarded at dimension 16000).  A Lanczos-propagated return
probability is provided as a fast path for parameter scans; it reproduces the
dense result to the requested tolerance by growing the chain adaptively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InputError
from .hilbert import StateVector
from .krylov import lanczos, tridiagonal
from .operators import SparseHamiltonian

DENSE_DIM_LIMIT = 16000
_TIME_CHUNK = 256
_DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class EigenSystem:
    """Full spectrum and orthonormal eigenbasis of a symmetric operator."""

    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # orthonormal columns

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass
class TimeSeries:
    """Real-valued series on a strictly increasing time grid."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if len(self.times) != len(self.values):
            raise InputError("times and values must have equal length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise InputError("time grid must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)


def time_grid(dt: float = 0.02, t_max: float = 40.0) -> np.ndarray:
    if dt <= 0 or t_max <= 0:
        raise InputError("dt and t_max must be positive")
    return np.arange(0.0, t_max + 0.5 * dt, dt)


def _amplitudes(psi) -> np.ndarray:
    return psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)


def eigendecompose(h: SparseHamiltonian) -> EigenSystem:
    """Dense symmetric eigendecomposition with a capacity guard."""
    if h.dim > DENSE_DIM_LIMIT:
        raise CapacityError(
            f"dense eigendecomposition limited to dimension {DENSE_DIM_LIMIT}, "
            f"got {h.dim}")
    if not h.symmetric:
        raise InputError("eigendecompose expects a symmetric operator")
    w, v = np.linalg.eigh(h.to_dense())
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def _energy_coefficients(eig: EigenSystem, psi0) -> np.ndarray:
    amps = _amplitudes(psi0)
    if len(amps) != eig.dim:
        raise InputError("state dimension does not match the eigensystem")
    return eig.eigenvectors.conj().T @ amps


def return_probability(eig: EigenSystem, psi0, times) -> TimeSeries:
    """|<psi0| e^{-iHt} |psi0>|^2 on the given grid."""
    amps = _amplitudes(psi0)
    if abs(np.linalg.norm(amps) - 1.0) > 1e-9:
        raise InputError("initial state must be normalized")
    weights = np.abs(_energy_coefficients(eig, amps)) ** 2
    times = np.asarray(times, dtype=float)
    overlap = np.exp(-1j * np.outer(times, eig.eigenvalues)) @ weights
    return TimeSeries(times, np.abs(overlap) ** 2)


def _evolved_states(eig: EigenSystem, psi0, times_chunk: np.ndarray) -> np.ndarray:
    """Columns psi(t) in the configuration basis for one chunk of times."""
    coeff = _energy_coefficients(eig, psi0)
    phases = np.exp(-1j * np.outer(eig.eigenvalues, times_chunk))
    return eig.eigenvectors @ (phases * coeff[:, None])


def spread_complexity(eig: EigenSystem, psi0, krylov_vectors, times
                      ) -> tuple[TimeSeries, TimeSeries]:
    """Mean chain depth sum_k k |<K_k|psi(t)>|^2 plus the weight leakage.

    Returns (complexity, leakage) with leakage(t) = 1 - sum_k |<K_k|psi(t)>|^2.
    """
    kv = np.asarray(krylov_vectors)
    if kv.ndim != 2 or kv.shape[1] != eig.dim:
        raise InputError("krylov_vectors must be rows of length matching the space")
    gram = kv.conj() @ kv.T
    if np.abs(gram - np.eye(len(kv))).max() > 1e-10:
        raise InputError("krylov_vectors must be orthonormal")
    amps = _amplitudes(psi0)
    if np.linalg.norm(amps - kv[0]) > 1e-9:
        raise InputError("initial state must be the first chain vector")
    times = np.asarray(times, dtype=float)
    depth = np.arange(len(kv))
    complexity = np.empty(len(times))
    leakage = np.empty(len(times))
    coeff = _energy_coefficients(eig, amps)
    projected = kv.conj() @ eig.eigenvectors          # (m, dim)
    weighted = projected * coeff[None, :]
    for start in range(0, len(times), _TIME_CHUNK):
        chunk = times[start:start + _TIME_CHUNK]
        phases = np.exp(-1j * np.outer(eig.eigenvalues, chunk))
        overlaps = weighted @ phases                  # (m, T)
        probs = np.abs(overlaps) ** 2
        complexity[start:start + len(chunk)] = depth @ probs
        leakage[start:start + len(chunk)] = 1.0 - probs.sum(axis=0)
    return TimeSeries(times, complexity), TimeSeries(times, leakage)


@dataclass
class ConvergenceTable:
    """Spread complexity evaluated for increasing chain lengths."""

    basis_counts: list
    times: np.ndarray
    complexity: np.ndarray        # row per basis count
    max_successive_diff: np.ndarray

    def rows(self):
        return list(zip(self.basis_counts, self.complexity))


def complexity_convergence(h: SparseHamiltonian, psi0, basis_counts, times,
                           eig: EigenSystem | None = None) -> ConvergenceTable:
    """Complexity at probe times for several Lanczos chain lengths."""
    counts = sorted(int(n) for n in basis_counts)
    if not counts:
        raise InputError("need at least one basis count")
    if counts[0] < 2 or counts[-1] > h.dim:
        raise InputError("basis counts must lie in [2, dim]")
    if eig is None:
        eig = eigendecompose(h)
    times = np.asarray(times, dtype=float)
    table = np.empty((len(counts), len(times)))
    for i, n in enumerate(counts):
        data = lanczos(h, psi0, max_steps=n - 1)
        series, _ = spread_complexity(eig, psi0, data.vectors, times)
        table[i] = series.values
    diffs = (np.abs(np.diff(table, axis=0)).max(axis=1)
             if len(counts) > 1 else np.zeros(0))
    return ConvergenceTable(basis_counts=counts, times=times,
                            complexity=table, max_successive_diff=diffs)


def expectation_series(eig: EigenSystem, psi0, observable: SparseHamiltonian,
                       times) -> TimeSeries:
    """<psi(t)| O |psi(t)> for a symmetric observable."""
    if observable.dim != eig.dim:
        raise InputError("observable dimension does not match the eigensystem")
    if not observable.symmetric:
        raise InputError("expectation_series expects a symmetric observable")
    times = np.asarray(times, dtype=float)
    values = np.empty(len(times))
    for start in range(0, len(times), _TIME_CHUNK):
        chunk = times[start:start + _TIME_CHUNK]
        states = _evolved_states(eig, psi0, chunk)
        values[start:start + len(chunk)] = np.real(
            np.einsum("it,it->t", states.conj(), observable.matrix @ states))
    return TimeSeries(times, values)


def diagonal_ensemble(eig: EigenSystem, psi0, observable: SparseHamiltonian) -> float:
    """Long-time average prediction with degenerate blocks projected."""
    if observable.dim != eig.dim:
        raise InputError("observable dimension does not match the eigensystem")
    coeff = _energy_coefficients(eig, psi0)
    w = eig.eigenvalues
    # contiguous groups of (numerically) equal eigenvalues
    breaks = np.flatnonzero(np.diff(w) > _DEGENERACY_TOL) + 1
    total = 0.0
    for block in np.split(np.arange(eig.dim), breaks):
        phi = eig.eigenvectors[:, block] @ coeff[block]
        total += float(np.real(phi.conj() @ (observable.matrix @ phi)))
    return total


def cross_correlation(a: TimeSeries, b: TimeSeries, max_lag: int):
    """Sliding-lag products S(tau) = sum_n a_{n+tau} b_n with zero padding.

    Returns (lags, raw, normalized); the normalized variant subtracts the
    series means and divides by the product of their full-series norms.
    """
    if len(a) != len(b) or np.max(np.abs(a.times - b.times)) > 1e-12:
        raise InputError("cross-correlation requires identical time grids")
    n = len(a)
    if not 0 <= max_lag < n:
        raise InputError(f"max_lag must be in [0, {n - 1}]")
    av, bv = a.values, b.values
    am, bm = av - av.mean(), bv - bv.mean()
    scale = np.linalg.norm(am) * np.linalg.norm(bm)
    lags = np.arange(-max_lag, max_lag + 1)
    raw = np.empty(len(lags))
    normalized = np.empty(len(lags))
    for i, tau in enumerate(lags):
        if tau >= 0:
            raw[i] = float(av[tau:] @ bv[:n - tau])
            centered = float(am[tau:] @ bm[:n - tau])
        else:
            raw[i] = float(av[:n + tau] @ bv[-tau:])
            centered = float(am[:n + tau] @ bm[-tau:])
        normalized[i] = centered / scale if scale > 0 else 0.0
    return lags, raw, normalized


def return_probability_lanczos(h: SparseHamiltonian, psi0, times,
                               tol: float = 1e-9, start_steps: int = 64) -> TimeSeries:
    """Return probability via propagation in the state's own Lanczos chain.

    Doubles the chain length until two successive evaluations agree within
    `tol` everywhere on the grid (or the chain closes), so the result matches
    the dense route at spectral accuracy for a fraction of the cost.
    """
    times = np.asarray(times, dtype=float)
    steps = min(max(2, start_steps), h.dim)
    previous = None
    while True:
        data = lanczos(h, psi0, max_steps=steps)
        theta, u = tridiagonal(data).eigensystem()
        weights = u[0] ** 2
        overlap = np.exp(-1j * np.outer(times, theta)) @ weights
        values = np.abs(overlap) ** 2
        closed = data.steps_run < steps + 1
        if closed or (previous is not None and np.max(np.abs(values - previous)) < tol):
            return TimeSeries(times, values)
        if steps >= h.dim:
            return TimeSeries(times, values)
        previous = values
        steps = min(steps * 2, h.dim)
