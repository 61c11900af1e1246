"""Tuning of perturbation strengths against revival and chain-error targets.

All objectives are oriented as maximizations.  Revival evaluations use the
Lanczos-propagated return probability, which matches the dense route to the
requested tolerance at a fraction of the cost of repeated eigendecompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .analytic import error3_vacuum
from .dynamics import TimeSeries, return_probability_lanczos, time_grid
from .errors import ConfigurationError, InputError
from .hilbert import enumerate_basis, special_state
from .krylov import fsa
from .operators import ModelConfig, assemble, ladder_split

OBJECTIVE_KINDS = ("revival_height", "neg_delta_av", "neg_error3_analytic",
                   "neg_error_n_numeric")


def revival_height(series: TimeSeries, noise: float = 1e-9) -> float:
    """Largest value the series reaches after first turning back up.

    The series must start at 1.  A fall and the subsequent upturn are only
    registered when they exceed `noise`, so double-precision ripple on a
    probability floor cannot masquerade as structure; taking the maximum of
    everything after the upturn scores the revival regime itself rather than
    whatever small shoulder happens to interrupt the initial decay first.  A
    series that never turns back up scores 0.
    """
    v = np.asarray(series.values, dtype=float)
    if len(v) < 3:
        raise InputError("series too short to locate a revival")
    if abs(v[0] - 1.0) > 1e-9:
        raise InputError("return probability must start at 1")
    running_max = np.maximum.accumulate(v)
    dropped = np.flatnonzero(running_max - v > noise)
    if len(dropped) == 0:
        return 0.0
    tail = v[dropped[0]:]
    running_min = np.minimum.accumulate(tail)
    risen = np.flatnonzero(tail - running_min > noise)
    if len(risen) == 0:
        return 0.0
    return float(tail[risen[0]:].max())


@dataclass
class Objective:
    """Maximization target over a vector of free term strengths."""

    kind: str
    config: ModelConfig
    free_terms: tuple[str, ...] = ()
    scheme: str | None = None
    times: np.ndarray | None = None
    error_step: int | None = None       # for neg_error_n_numeric
    _cache: dict = field(default_factory=dict, repr=False)
    evaluations: int = 0

    def __post_init__(self):
        if self.kind not in OBJECTIVE_KINDS:
            raise ConfigurationError(f"unknown objective kind {self.kind!r}")
        if self.kind == "neg_error_n_numeric" and not self.error_step:
            raise ConfigurationError("neg_error_n_numeric needs error_step")
        if self.kind in ("neg_delta_av", "neg_error_n_numeric") and self.scheme is None:
            raise ConfigurationError(f"objective {self.kind!r} needs a scheme")
        if self.times is None:
            # covers the first revival periods of all the tuned chains while
            # keeping accidental late-time recurrences of untuned ones out
            self.times = time_grid(dt=0.02, t_max=10.0)

    def _configured(self, x: np.ndarray) -> ModelConfig:
        if len(x) != len(self.free_terms):
            raise InputError(
                f"expected {len(self.free_terms)} strengths, got {len(x)}")
        return self.config.with_terms(**dict(zip(self.free_terms, map(float, x))))

    def __call__(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        key = tuple(np.round(x, 12))
        if key in self._cache:
            return self._cache[key]
        value = self._evaluate(x)
        self._cache[key] = value
        self.evaluations += 1
        return value

    def _evaluate(self, x: np.ndarray) -> float:
        if self.kind == "neg_error3_analytic":
            return -error3_vacuum(float(x[0]), self.config.L)
        cfg = self._configured(x)
        basis = enumerate_basis(cfg.L)
        if self.kind == "revival_height":
            h = assemble(basis, cfg)
            psi0 = special_state(basis, cfg.initial)
            series = return_probability_lanczos(h, psi0, self.times)
            return revival_height(series)
        ladder = ladder_split(basis, cfg, self.scheme)
        data = fsa(ladder, special_state(basis, cfg.initial))
        if self.kind == "neg_delta_av":
            return -data.delta_av
        n = self.error_step
        if n < 1 or n > len(data.errors_sq):
            raise InputError(f"chain has no step {n}")
        return -float(data.errors_sq[n - 1])


@dataclass
class OptimResult:
    """Best strengths found, with the full evaluation trace."""

    strengths: np.ndarray
    value: float
    evaluations: int
    trace: list
    converged: bool = True


def scan_1d(objective, lo: float, hi: float, steps: int) -> OptimResult:
    """Uniform grid scan refined by golden-section search around the best point."""
    if not lo < hi:
        raise InputError("scan needs lo < hi")
    if steps < 3:
        raise InputError("scan needs at least 3 grid points")
    trace = []

    def score(x):
        val = objective(np.array([x]))
        trace.append((x, val))
        return val

    grid = np.linspace(lo, hi, steps)
    values = [score(x) for x in grid]
    best = int(np.argmax(values))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, steps - 1)]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = score(x1), score(x2)
    while b - a > 1e-4:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = score(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = score(x2)
    candidates = [(x, v) for x, v in trace]
    x_best, v_best = max(candidates, key=lambda item: item[1])
    return OptimResult(strengths=np.array([x_best]), value=v_best,
                       evaluations=len(trace), trace=trace)


def optimize_vector(objective, x0, radius: float = 0.05, seed: int = 0,
                    max_restarts: int = 2, max_iter: int = 4000) -> OptimResult:
    """Derivative-free simplex maximization with bounded restarts.

    Deterministic: the initial simplex is built from coordinate displacements
    of size `radius` (shrunk on every restart); `seed` is accepted for
    interface stability but no randomness is involved.
    """
    del seed
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if len(x0) > 6:
        raise InputError("vector optimization supports at most 6 parameters")
    trace = []

    def negated(x):
        val = objective(x)
        trace.append((tuple(x), val))
        return -val

    best_x, best_v = x0, objective(x0)
    trace.append((tuple(x0), best_v))
    converged = True
    step = radius
    for _ in range(max_restarts + 1):
        simplex = np.vstack([best_x] + [best_x + step * e
                                        for e in np.eye(len(x0))])
        res = minimize(negated, best_x, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-4,
                                "fatol": 1e-10, "maxiter": max_iter,
                                "maxfev": max_iter})
        converged = converged and bool(res.success)
        if -res.fun > best_v:
            best_x, best_v = np.atleast_1d(res.x), -res.fun
        step /= 4.0
    return OptimResult(strengths=best_x, value=best_v,
                       evaluations=len(trace), trace=trace,
                       converged=converged)
