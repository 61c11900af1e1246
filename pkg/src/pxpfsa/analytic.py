"""Closed-form reference values for the forward-scattering chains.

The third-step error formulas are squared backward-defect norms (epsilon in
the `krylov` bookkeeping), which is the convention under which they agree with
the numerics; the corresponding h = 0 limits are checked explicitly in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitError

Q_SEARCH_RANGE = (0.3, 1.5)
# tight enough that an exactly q-generated input fits back to residual < 1e-8
_GOLDEN_TOL = 1e-10


def _require_even(L: int, minimum: int, what: str) -> None:
    if L < minimum or L % 2:
        raise DomainError(f"{what} needs even L >= {minimum}, got {L}")


def beta_vacuum(n: int, L: int) -> float:
    """Forward norms from the all-down state, bare chain, steps 1-3."""
    _require_even(L, 6, "beta_vacuum")
    if n == 1:
        return math.sqrt(L)
    if n == 2:
        return math.sqrt(2 * (L - 3))
    if n == 3:
        return math.sqrt(3 * (L - 4) * (L - 5) / (L - 3))
    raise DomainError(f"closed form only available for steps 1-3, got {n}")


def beta_vacuum_perturbed(n: int, L: int, h: float) -> float:
    """Steps 2-3 from the all-down state with the 3-site window term at h."""
    _require_even(L, 8, "beta_vacuum_perturbed")
    beta2_sq = h * h + 4 * h + 2 * L - 6
    if beta2_sq <= 0:
        raise DomainError(f"beta_2 undefined at h={h}, L={L}")
    if n == 2:
        return math.sqrt(beta2_sq)
    if n == 3:
        return math.sqrt((9 * (L - 3) * h * h + 36 * (L - 5) * h
                          + 6 * (L - 4) * (L - 5))) / math.sqrt(beta2_sq)
    raise DomainError(f"closed form only available for steps 2-3, got {n}")


def error3_vacuum(h: float, L: int) -> float:
    """Squared third-step backward error from the all-down state at strength h."""
    _require_even(L, 8, "error3_vacuum")
    f = ((6 * L + 6) * h ** 6 + (72 * L - 168) * h ** 5 + (300 * L - 1368) * h ** 4
         + (288 * L - 1608) * h ** 3 + (30 * L - 438) * h ** 2
         + (-120 * L + 696) * h + (24 * L - 120))
    g = ((3 * L - 9) * h ** 4 + (24 * L - 96) * h ** 3
         + (8 * L * L - 6 * L - 146) * h ** 2 + (32 * L * L - 264 * L + 520) * h
         + 4 * L ** 3 - 48 * L * L + 188 * L - 240)
    if not (np.isfinite(f) and np.isfinite(g)):
        raise DomainError(f"error3 polynomial overflow at h={h}, L={L}")
    if g <= 0:
        raise DomainError(f"error3 denominator non-positive at h={h}, L={L}")
    return f / g


def delta3_z2(L: int) -> float:
    """Squared third-step backward error of the even/odd chain (epsilon_3)."""
    _require_even(L, 6, "delta3_z2")
    return 8 * (L - 6) / ((L - 2) * (3 * L * L - 18 * L + 32))


def beta3_z2(L: int) -> float:
    """Third forward norm of the even/odd chain."""
    _require_even(L, 6, "beta3_z2")
    return math.sqrt(3 * (L - 4) / 2 + 4 / (L - 2))


def su2_beta(n: int, N: int) -> float:
    """Ladder norms sqrt(n (N - n + 1)) of an exact spin-N/2 chain."""
    if not 1 <= n <= N:
        raise DomainError(f"step n must satisfy 1 <= n <= {N}, got {n}")
    return math.sqrt(n * (N - n + 1))


def qnumber(x: float, q: float) -> float:
    """Deformed number (q^x - q^-x) / (q - 1/q); equals x as q -> 1."""
    if q <= 0:
        raise DomainError(f"deformation parameter must be positive, got {q}")
    if abs(q - 1.0) < 1e-9:
        return float(x)
    lam = math.log(q)
    return math.sinh(x * lam) / math.sinh(lam)


@dataclass(frozen=True)
class QFit:
    """Least-squares deformation fit of a ladder-norm sequence."""

    q: float
    alpha: float
    j: float          # 2j + 1 is the chain length
    residual: float   # rms misfit

    def model(self) -> np.ndarray:
        n = np.arange(1, int(2 * self.j) + 1)
        return self.alpha * _q_profile(self.q, n, int(2 * self.j))


def _q_profile(q: float, n: np.ndarray, twoj: int) -> np.ndarray:
    vals = np.array([qnumber(k, q) * qnumber(twoj - k + 1, q) for k in n])
    return np.sqrt(np.maximum(vals, 0.0))


def _fit_at(q: float, betas: np.ndarray, twoj: int) -> tuple[float, float]:
    profile = _q_profile(q, np.arange(1, twoj + 1), twoj)
    denom = float(profile @ profile)
    if denom == 0.0:
        return 0.0, float(betas @ betas)
    alpha = float(betas @ profile) / denom
    resid = betas - alpha * profile
    return alpha, float(resid @ resid)


def fit_q(betas) -> QFit:
    """Fit beta_n = alpha sqrt([n]_q [2j - n + 1]_q) over (q, alpha).

    One-dimensional in q after eliminating alpha in closed form; a coarse grid
    over (0.3, 1.5] is refined by golden-section search.  Deformed numbers are
    invariant under q -> 1/q, so the twin optima are identical fits; the
    canonical representative q <= 1 is reported.
    """
    betas = np.asarray(betas, dtype=float)
    if np.count_nonzero(betas) < 3:
        raise FitError("need at least three non-zero coefficients to fit")
    twoj = len(betas)
    lo, hi = Q_SEARCH_RANGE

    def loss(q):
        return _fit_at(q, betas, twoj)[1]

    grid = np.linspace(lo + 1e-6, hi, 121)
    losses = [loss(q) for q in grid]
    best = int(np.argmin(losses))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, len(grid) - 1)]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = loss(x1), loss(x2)
    while b - a > _GOLDEN_TOL:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = loss(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = loss(x2)
    q_best = 0.5 * (a + b)
    if q_best > 1.0:
        q_best = 1.0 / q_best
    alpha, sq = _fit_at(q_best, betas, twoj)
    return QFit(q=q_best, alpha=alpha, j=twoj / 2.0,
                residual=math.sqrt(sq / twoj))
