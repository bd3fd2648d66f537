"""Reverse-lexicographic indexing of binary vectors.

The 2^d vectors of {0,1}^d are ordered so that coordinate 1 varies fastest:
for d=3 the sequence is 000, 100, 010, 110, 001, 101, 011, 111.  Under this
order the vector at index i has j-th coordinate equal to bit j-1 of i, so
index arithmetic is plain bit twiddling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Dense carriers (one entry per binary vector) are capped here; sparse
# representations and unranking work for any d.
DENSE_D_MAX = 20


def _check_dimension(d: int, *, dense: bool = True) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if dense and d > DENSE_D_MAX:
        raise ValueError(f"dense operations are limited to d <= {DENSE_D_MAX}, got {d}")


def index_to_vector(i: int, d: int) -> tuple[int, ...]:
    """Binary vector at position i of the reverse-lexicographic order."""
    _check_dimension(d, dense=False)
    if not 0 <= i < (1 << d):
        raise ValueError(f"index {i} out of range for d={d}")
    return tuple((i >> j) & 1 for j in range(d))


def vector_to_index(x) -> int:
    """Inverse of index_to_vector."""
    i = 0
    for j, bit in enumerate(x):
        if bit not in (0, 1):
            raise ValueError(f"binary vector entries must be 0 or 1, got {bit!r}")
        i |= int(bit) << j
    return i


def level_weight(i: int) -> int:
    """Number of ones in the vector at index i."""
    return int(i).bit_count()


def level_indices(d: int, k: int) -> tuple[int, ...]:
    """All indices with exactly k ones, in increasing index order.

    The first element is always the vector with k leading ones (index 2^k - 1)
    and the cardinality is C(d, k).
    """
    _check_dimension(d)
    if not 0 <= k <= d:
        raise ValueError(f"level k={k} out of range for d={d}")
    return tuple(i for i in range(1 << d) if i.bit_count() == k)


def level_element(d: int, k: int, j: int) -> int:
    """Index of the j-th element (1-based) of the level-k slice.

    Unranks without materializing the slice: ascending indices with popcount k
    correspond to k-subsets of bit positions in colexicographic order, so the
    combinadic digits of j-1 are exactly the bit positions.
    """
    _check_dimension(d, dense=False)
    if not 0 <= k <= d:
        raise ValueError(f"level k={k} out of range for d={d}")
    size = math.comb(d, k)
    if not 1 <= j <= size:
        raise ValueError(f"position {j} out of range for level of size {size}")
    r = j - 1
    index = 0
    for slot in range(k, 0, -1):
        # Largest c with C(c, slot) <= r; that bit belongs to the subset.
        c = slot - 1
        while math.comb(c + 1, slot) <= r:
            c += 1
        r -= math.comb(c, slot)
        index |= 1 << c
    return index


def level_rank(i: int) -> int:
    """1-based position of index i within its own level slice."""
    r = 0
    slot = 0
    for c in range(int(i).bit_length()):
        if (i >> c) & 1:
            slot += 1
            r += math.comb(c, slot)
    return r + 1


@lru_cache(maxsize=None)
def _popcounts(d: int) -> np.ndarray:
    pc = np.zeros(1, dtype=np.int64)
    for _ in range(d):
        pc = np.concatenate([pc, pc + 1])
    return pc


@dataclass(frozen=True)
class BinaryIndexer:
    """Bijection between {0, ..., 2^d - 1} and {0,1}^d in reverse-lex order."""

    d: int

    def __post_init__(self):
        _check_dimension(self.d)

    @property
    def size(self) -> int:
        return 1 << self.d

    def to_vector(self, i: int) -> tuple[int, ...]:
        return index_to_vector(i, self.d)

    def to_index(self, x) -> int:
        x = tuple(x)
        if len(x) != self.d:
            raise ValueError(f"expected a vector of length {self.d}, got {len(x)}")
        return vector_to_index(x)

    def level(self, k: int) -> tuple[int, ...]:
        return level_indices(self.d, k)

    def popcounts(self) -> np.ndarray:
        """Vector of level weights for all indices, aligned with index order."""
        return _popcounts(self.d)
