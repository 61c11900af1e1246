"""Hamiltonian terms of the PXP family and their ladder decompositions.

Every operator lives in the constrained basis: matrix elements are kept only
between admissible configurations (projection onto the constrained space).
All terms built here connect configurations differing by a definite spin-flip
pattern, so each matrix element changes the Hamming distance to a scheme's
reference state by exactly +-1.  Ladder pairs H+ / H- are obtained by grading
the assembled matrix with that distance, which enforces H- = (H+)^T and the
annihilation of the reference state by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, InputError
from .hilbert import ConstrainedBasis, StateVector, enumerate_basis, special_state_code

SIGMA_TERMS = ("sigma3", "sigma5", "sigma7", "sigma9", "sigma11", "sigma13")
TERM_NAMES = ("pxp", "z2pert", "z3pert1", "z3pert2", "z3pert3") + SIGMA_TERMS

SCHEMES = ("z2", "z3", "vacuum", "z3exact")

# terms (besides pxp) that each scheme can carry through its ladder split
_SCHEME_TERMS = {
    "z2": {"z2pert"},
    "z3": {"z3pert1", "z3pert2", "z3pert3"},
    "z3exact": {"z3pert1"},
    "vacuum": set(SIGMA_TERMS),
}
_SCHEME_INITIAL = {
    "z2": ("z2", "z2prime"),
    "z3": ("z3",),
    "z3exact": ("z3",),
    "vacuum": ("vacuum",),
}


@dataclass(frozen=True)
class SparseHamiltonian:
    """Real sparse operator in CSR layout."""

    matrix: sp.csr_matrix
    symmetric: bool = True

    def __post_init__(self):
        m = self.matrix.tocsr()
        m.sum_duplicates()
        m.eliminate_zeros()
        m.sort_indices()
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_dense(cls, array, symmetric: bool = True) -> "SparseHamiltonian":
        return cls(sp.csr_matrix(np.asarray(array, dtype=float)), symmetric)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def transpose(self) -> "SparseHamiltonian":
        return SparseHamiltonian(self.matrix.T.tocsr(), self.symmetric)

    def max_abs(self) -> float:
        return float(np.abs(self.matrix.data).max()) if self.matrix.nnz else 0.0

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ amplitudes


def matvec(h: SparseHamiltonian, v: StateVector) -> StateVector:
    """Sparse product H |v> with a dimension guard."""
    if v.dim != h.dim:
        raise InputError(f"dimension mismatch: operator {h.dim}, vector {v.dim}")
    return StateVector(v.basis, h.apply(v.amplitudes))


@dataclass(frozen=True)
class ModelConfig:
    """System size, initial-state tag and named perturbation strengths.

    The bare flip term enters at unit strength and need not be listed; an
    explicit 'pxp' entry is accepted only at exactly 1.0.
    """

    L: int
    initial: str = "z2"
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        special_state_code(self.L, self.initial)  # validates tag/size pairing
        cleaned = {}
        for name, strength in self.terms.items():
            if name not in TERM_NAMES:
                raise ConfigurationError(f"unknown term {name!r}; expected one of {TERM_NAMES}")
            strength = float(strength)
            if not np.isfinite(strength):
                raise ConfigurationError(f"term {name!r} has non-finite strength")
            if name == "pxp":
                if strength != 1.0:
                    raise ConfigurationError("the bare flip term is fixed at unit strength")
                continue
            _check_term_applicable(name, self.L)
            if strength != 0.0:
                cleaned[name] = strength
        object.__setattr__(self, "terms", cleaned)

    def with_terms(self, **updates) -> "ModelConfig":
        merged = dict(self.terms)
        merged.update(updates)
        return ModelConfig(self.L, self.initial, merged)

    def sorted_terms(self) -> list[tuple[str, float]]:
        return sorted(self.terms.items())


def _check_term_applicable(name: str, L: int) -> None:
    if name.startswith("z3pert") and L % 3:
        raise ConfigurationError(f"term {name!r} requires L divisible by 3, got L={L}")
    if name in SIGMA_TERMS:
        span = int(name[5:])          # window length 2k+1
        half = (span - 1) // 2
        # window plus at least one flanking site must fit on the ring; at
        # L = span + 1 the two flanks coincide, which is still well defined
        if L < 2 * half + 2:
            raise ConfigurationError(f"term {name!r} needs L >= {2 * half + 2}, got L={L}")


def _bit(code: int, site: int) -> int:
    return (code >> site) & 1


def _pxp_entries(basis: ConstrainedBasis):
    L, index = basis.L, basis.index
    rows, cols, vals = [], [], []
    for a, s in enumerate(basis.states.tolist()):
        for j in range(L):
            if _bit(s, (j - 1) % L) or _bit(s, (j + 1) % L):
                continue
            rows.append(index[s ^ (1 << j)])
            cols.append(a)
            vals.append(1.0)
    return rows, cols, vals


def _z2pert_entries(basis: ConstrainedBasis):
    # sum_j sigma-tilde^x_j (P_{j-2} + P_{j+2}); the outer projectors act on
    # sites untouched by the flip, so they commute with it
    L, index = basis.L, basis.index
    rows, cols, vals = [], [], []
    for a, s in enumerate(basis.states.tolist()):
        for j in range(L):
            if _bit(s, (j - 1) % L) or _bit(s, (j + 1) % L):
                continue
            weight = (1 - _bit(s, (j - 2) % L)) + (1 - _bit(s, (j + 2) % L))
            if weight:
                rows.append(index[s ^ (1 << j)])
                cols.append(a)
                vals.append(float(weight))
    return rows, cols, vals


# projector/flip strings with offsets anchored at multiples of three
_Z3_STRINGS = {
    "z3pert1": (
        ((-2, "P"), (-1, "x"), (0, "P"), (1, "P")),
        ((-1, "P"), (0, "P"), (1, "x"), (2, "P")),
        ((-1, "P"), (0, "x"), (1, "P"), (2, "P")),
        ((-2, "P"), (-1, "P"), (0, "x"), (1, "P")),
    ),
    "z3pert2": (
        ((0, "P"), (1, "P"), (2, "x"), (3, "P")),
        ((0, "P"), (1, "x"), (2, "P"), (3, "P")),
    ),
    "z3pert3": (
        ((0, "P"), (1, "x"), (2, "x"), (3, "x"), (4, "P")),
        ((-1, "P"), (0, "x"), (1, "x"), (2, "x"), (3, "P")),
    ),
}


def _string_entries(basis: ConstrainedBasis, strings, anchors):
    """Apply products of down-projectors and unconditional flips.

    Flip results outside the constrained space are dropped, which implements
    the projection of the operator onto the admissible subspace.
    """
    L, index = basis.L, basis.index
    rows, cols, vals = [], [], []
    for a, s in enumerate(basis.states.tolist()):
        for anchor in anchors:
            for string in strings:
                target = s
                ok = True
                for off, kind in string:
                    site = (anchor + off) % L
                    if kind == "P":
                        if _bit(s, site):
                            ok = False
                            break
                    else:
                        target ^= 1 << site
                if not ok:
                    continue
                t_idx = index.get(target)
                if t_idx is not None:
                    rows.append(t_idx)
                    cols.append(a)
                    vals.append(1.0)
    return rows, cols, vals


def _window_entries(basis: ConstrainedBasis, half: int):
    """Alternating-window exchange over 2*half+1 sites with down flanks.

    Connects the (half+1)-up pattern 1010...01 with its complement 0101...10,
    both flanking sites down.  Defined as R + R^T with R the up-count-lowering
    direction; the ordered product of constrained flips only realizes one
    direction, so symmetrizing is what makes the term Hermitian.
    """
    L, index = basis.L, basis.index
    if L < 2 * half + 2:
        raise ConfigurationError(f"window of {2 * half + 1} sites needs L >= {2 * half + 2}")
    rows, cols, vals = [], [], []
    for center in range(L):
        sites = [(center + off) % L for off in range(-half, half + 1)]
        win_mask = 0
        a_mask = 0
        for pos, site in enumerate(sites):
            win_mask |= 1 << site
            if pos % 2 == 0:
                a_mask |= 1 << site
        b_mask = win_mask ^ a_mask
        flank = (1 << ((center - half - 1) % L)) | (1 << ((center + half + 1) % L))
        for a, s in enumerate(basis.states.tolist()):
            if s & flank:
                continue
            window = s & win_mask
            if window == a_mask or window == b_mask:
                rows.append(index[s ^ win_mask])
                cols.append(a)
                vals.append(1.0)
    return rows, cols, vals


@lru_cache(maxsize=None)
def _term_matrix(L: int, name: str) -> sp.csr_matrix:
    basis = enumerate_basis(L)
    if name == "pxp":
        rows, cols, vals = _pxp_entries(basis)
    elif name == "z2pert":
        rows, cols, vals = _z2pert_entries(basis)
    elif name in _Z3_STRINGS:
        _check_term_applicable(name, L)
        rows, cols, vals = _string_entries(basis, _Z3_STRINGS[name], range(0, L, 3))
    elif name in SIGMA_TERMS:
        _check_term_applicable(name, L)
        rows, cols, vals = _window_entries(basis, (int(name[5:]) - 1) // 2)
    else:
        raise ConfigurationError(f"unknown term {name!r}")
    m = sp.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim)).tocsr()
    m.sum_duplicates()
    return m


def build_pxp(basis: ConstrainedBasis) -> SparseHamiltonian:
    """Constrained-flip Hamiltonian: unit element per blockade-legal spin flip."""
    return SparseHamiltonian(_term_matrix(basis.L, "pxp"))


def build_term(basis: ConstrainedBasis, name: str) -> SparseHamiltonian:
    """Unit-strength perturbation term by name."""
    if name not in TERM_NAMES:
        raise ConfigurationError(f"unknown term {name!r}; expected one of {TERM_NAMES}")
    return SparseHamiltonian(_term_matrix(basis.L, name))


def assemble(basis: ConstrainedBasis, config: ModelConfig) -> SparseHamiltonian:
    """H = flip term + sum of strength * term, in deterministic term order."""
    if config.L != basis.L:
        raise InputError(f"config L={config.L} does not match basis L={basis.L}")
    total = _term_matrix(basis.L, "pxp").copy()
    for name, strength in config.sorted_terms():
        total = total + strength * _term_matrix(basis.L, name)
    return SparseHamiltonian(total.tocsr())


@dataclass(frozen=True)
class LadderPair:
    """Raising/lowering decomposition H = H+ + H- relative to a scheme."""

    hplus: SparseHamiltonian
    hminus: SparseHamiltonian
    scheme: str
    config: ModelConfig | None
    basis: ConstrainedBasis | None = None
    grades: np.ndarray | None = None

    def total(self) -> SparseHamiltonian:
        return SparseHamiltonian((self.hplus.matrix + self.hminus.matrix).tocsr())

    @property
    def dim(self) -> int:
        return self.hplus.dim


def _split_by_grade(matrix: sp.csr_matrix, grades: np.ndarray, what: str):
    coo = matrix.tocoo()
    dg = grades[coo.row] - grades[coo.col]
    if np.any(np.abs(dg) != 1):
        raise ConfigurationError(
            f"no ladder form: {what} has matrix elements that do not move one "
            "step in the grading")
    up = dg == 1
    shape = matrix.shape
    hplus = sp.coo_matrix((coo.data[up], (coo.row[up], coo.col[up])), shape=shape).tocsr()
    hminus = sp.coo_matrix((coo.data[~up], (coo.row[~up], coo.col[~up])), shape=shape).tocsr()
    return hplus, hminus


def ladder_split(basis: ConstrainedBasis, config: ModelConfig, scheme: str) -> LadderPair:
    """Split the assembled Hamiltonian into H+ / H- for the given scheme.

    Grading = Hamming distance to the scheme's reference configuration, so
    H- annihilates the initial state and H+ annihilates the chain's far end.
    """
    if scheme not in SCHEMES:
        raise ConfigurationError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if config.initial not in _SCHEME_INITIAL[scheme]:
        raise ConfigurationError(
            f"scheme {scheme!r} requires initial in {_SCHEME_INITIAL[scheme]}, "
            f"got {config.initial!r}")
    extra = set(config.terms) - _SCHEME_TERMS[scheme]
    if extra:
        raise ConfigurationError(
            f"no ladder form for terms {sorted(extra)} under scheme {scheme!r}")
    if scheme == "z3exact" and config.terms != {"z3pert1": -1.0}:
        raise ConfigurationError(
            "scheme 'z3exact' is the strong deformation flip term minus the "
            "first three-site correction at unit strength; set z3pert1=-1")
    ref = special_state_code(config.L, config.initial)
    grades = np.bitwise_xor(basis.states, ref)
    grades = np.unpackbits(grades.astype("<u8").view(np.uint8).reshape(-1, 8),
                           axis=1).sum(axis=1).astype(np.int64)
    h = assemble(basis, config)
    hplus, hminus = _split_by_grade(h.matrix, grades, f"scheme {scheme!r}")
    return LadderPair(
        hplus=SparseHamiltonian(hplus, symmetric=False),
        hminus=SparseHamiltonian(hminus, symmetric=False),
        scheme=scheme, config=config, basis=basis, grades=grades)


def free_paramagnet(L: int) -> tuple[LadderPair, StateVector]:
    """Unconstrained transverse-field control with exact raising/lowering.

    Returns the sigma+/sigma- ladder over the full 2^L space together with the
    all-down initial state; the Lanczos chain of the total operator realizes an
    exact spin-L/2 multiplet.
    """
    dim = 1 << L
    rows, cols = [], []
    for s in range(dim):
        for j in range(L):
            if not (s >> j) & 1:
                rows.append(s | (1 << j))
                cols.append(s)
    vals = np.ones(len(rows))
    hplus = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    pair = LadderPair(
        hplus=SparseHamiltonian(hplus, symmetric=False),
        hminus=SparseHamiltonian(hplus.T.tocsr(), symmetric=False),
        scheme="paramagnet", config=None, basis=None,
        grades=np.array([s.bit_count() for s in range(dim)], dtype=np.int64))
    v0 = np.zeros(dim)
    v0[0] = 1.0
    return pair, StateVector(None, v0)


def algebra_defect(ladder: LadderPair) -> float:
    """Largest entry of [H_z, H+-] -+ H+- with H_z = [H+, H-] / 2.

    Zero for an exact raising/lowering algebra; measured over the whole
    constrained space as a max-absolute matrix element.
    """
    hp, hm = ladder.hplus.matrix, ladder.hminus.matrix
    hz = 0.5 * (hp @ hm - hm @ hp)
    defects = (hz @ hp - hp @ hz - hp, hz @ hm - hm @ hz + hm)
    worst = 0.0
    for d in defects:
        d = sp.csr_matrix(d)
        if d.nnz:
            worst = max(worst, float(np.abs(d.data).max()))
    return worst


def up_density(basis: ConstrainedBasis) -> SparseHamiltonian:
    """Diagonal observable (1/L) sum_j n_j."""
    diag = basis.popcounts.astype(float) / basis.L
    return SparseHamiltonian(sp.diags(diag).tocsr())


def next_nearest_pair_density(basis: ConstrainedBasis) -> SparseHamiltonian:
    """Diagonal observable (1/L) sum_j n_j n_{j+2}."""
    L = basis.L
    diag = np.zeros(basis.dim)
    for a, s in enumerate(basis.states.tolist()):
        diag[a] = sum(_bit(s, j) & _bit(s, (j + 2) % L) for j in range(L)) / L
    return SparseHamiltonian(sp.diags(diag).tocsr())
