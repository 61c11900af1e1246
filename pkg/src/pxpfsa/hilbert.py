"""Blockade-constrained Hilbert space of a periodic spin-1/2 chain.

Configurations are bitmasks with site 0 at the least significant bit; a set
bit is an up (excited) spin.  A configuration is admissible when no two
cyclically adjacent sites are both up.  The basis is the sorted list of all
admissible bitmasks, whose count follows the Lucas numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, InputError, SizeError

MAX_SITES = 28          # keeps the enumeration below ~1.2e6 states
_CHUNK = 1 << 22        # bitmask filter block size

STATE_TAGS = ("vacuum", "z2", "z2prime", "z3")


def _cycle_left(code: int, shift: int, size: int) -> int:
    """Rotate a length-`size` bitmask so bit i moves to bit (i+shift) % size."""
    shift %= size
    mask = (1 << size) - 1
    return ((code << shift) | (code >> (size - shift))) & mask


def _is_admissible(code: int, size: int) -> bool:
    return (code & _cycle_left(code, 1, size)) == 0


@dataclass(frozen=True)
class SpinConfiguration:
    """A single admissible product state on the ring."""

    code: int
    size: int

    def __post_init__(self):
        if not 0 <= self.code < (1 << self.size):
            raise ConfigurationError(f"code {self.code} out of range for {self.size} sites")
        if not _is_admissible(self.code, self.size):
            raise ConfigurationError(
                f"configuration {self.code:0{self.size}b} has adjacent up spins")

    @classmethod
    def from_bits(cls, bits) -> "SpinConfiguration":
        """Build from an iterable of {0,1} with entry i giving site i."""
        bits = list(bits)
        code = sum(1 << i for i, b in enumerate(bits) if b)
        return cls(code, len(bits))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.code >> i) & 1 for i in range(self.size))

    def popcount(self) -> int:
        return int(self.code).bit_count()

    def translated(self, shift: int) -> "SpinConfiguration":
        return SpinConfiguration(_cycle_left(self.code, shift, self.size), self.size)

    def __str__(self) -> str:
        # site 0 printed last, matching the LSB-first integer encoding
        return format(self.code, f"0{self.size}b")


@dataclass(frozen=True)
class ConstrainedBasis:
    """Sorted enumeration of all admissible configurations at size L."""

    L: int
    states: np.ndarray                 # int64, ascending
    popcounts: np.ndarray              # uint8, aligned with states
    index: dict = field(repr=False)    # code -> ordinal

    @property
    def dim(self) -> int:
        return len(self.states)

    def configuration(self, i: int) -> SpinConfiguration:
        return SpinConfiguration(int(self.states[i]), self.L)

    def index_of(self, code: int) -> int:
        try:
            return self.index[code]
        except KeyError:
            raise ConfigurationError(
                f"configuration {code} is not in the constrained basis") from None


@lru_cache(maxsize=None)
def enumerate_basis(L: int) -> ConstrainedBasis:
    """All admissible configurations at size L, sorted by integer encoding."""
    if not isinstance(L, int) or not 3 <= L <= MAX_SITES:
        raise SizeError(f"L must be an integer in [3, {MAX_SITES}], got {L!r}")
    mask = (1 << L) - 1
    kept = []
    for start in range(0, 1 << L, _CHUNK):
        block = np.arange(start, min(start + _CHUNK, 1 << L), dtype=np.int64)
        rotated = ((block << 1) | (block >> (L - 1))) & mask
        kept.append(block[(block & rotated) == 0])
    states = np.concatenate(kept)
    pops = np.unpackbits(states.astype("<u8").view(np.uint8).reshape(-1, 8),
                         axis=1).sum(axis=1).astype(np.uint8)
    states.setflags(write=False)
    pops.setflags(write=False)
    index = {int(s): i for i, s in enumerate(states)}
    return ConstrainedBasis(L=L, states=states, popcounts=pops, index=index)


@dataclass
class StateVector:
    """Amplitude vector over a basis (or over a raw space when basis is None)."""

    basis: ConstrainedBasis | None
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes)
        if not np.all(np.isfinite(self.amplitudes)):
            raise InputError("state vector has non-finite amplitudes")
        if self.basis is not None and len(self.amplitudes) != self.basis.dim:
            raise InputError(
                f"amplitude length {len(self.amplitudes)} != basis dim {self.basis.dim}")

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def require_normalized(self, tol: float = 1e-12) -> None:
        if abs(self.norm() - 1.0) >= tol:
            raise InputError(f"state vector is not normalized (norm {self.norm()})")


def special_state_code(L: int, tag: str) -> int:
    """Bitmask of a tagged reference state (validates parity/divisibility)."""
    if tag == "vacuum":
        return 0
    if tag in ("z2", "z2prime"):
        if L % 2:
            raise ConfigurationError(f"tag {tag!r} requires even L, got {L}")
        start = 0 if tag == "z2" else 1
        return sum(1 << i for i in range(start, L, 2))
    if tag == "z3":
        if L % 3:
            raise ConfigurationError(f"tag 'z3' requires L divisible by 3, got {L}")
        return sum(1 << i for i in range(0, L, 3))
    raise ConfigurationError(f"unknown state tag {tag!r}; expected one of {STATE_TAGS}")


def special_state(basis: ConstrainedBasis, tag: str) -> StateVector:
    """Unit vector on the tagged configuration (vacuum, z2, z2prime, z3)."""
    code = special_state_code(basis.L, tag)
    amplitudes = np.zeros(basis.dim)
    amplitudes[basis.index_of(code)] = 1.0
    return StateVector(basis, amplitudes)


def translate(config: SpinConfiguration, shift: int) -> SpinConfiguration:
    """Cyclic rotation moving site i to site (i+shift) mod L."""
    return config.translated(shift)


def hamming_from_vacuum(config: SpinConfiguration) -> int:
    """Number of up spins, i.e. Hamming distance from the all-down state."""
    return config.popcount()


def count_sector(basis: ConstrainedBasis, k: int) -> int:
    """Number of basis configurations with exactly k up spins."""
    return int(np.count_nonzero(basis.popcounts == k))
