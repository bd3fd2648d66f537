"""Probability mass functions on {0,...,d} and on {0,1}^d.

Three carriers: SumPmf (a point of the d-simplex of sum laws), JointPmf
(dense over the 2^d binary vectors, reverse-lex indexed), and SparseJointPmf
(support-indexed, the natural carrier for extremal pmfs which have at most
d+1 atoms).  Values may be floats or exact Fractions; a pmf whose entries are
all exact must sum to exactly 1, a float pmf must sum to 1 within PROB_TOL.

JSON forms: SumPmf is a bare array, JointPmf is {"d": ..., "values": [...]},
SparseJointPmf is {"d": ..., "atoms": [[index, mass], ...]}.  Exact values
serialize as "num/den" strings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Union

import numpy as np

from .indexing import _check_dimension, _popcounts, level_weight

PROB_TOL = 1e-12

Number = Union[int, float, Fraction]


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def as_number(v) -> Number:
    """Coerce a JSON-ish scalar ("num/den" strings allowed) to int/float/Fraction."""
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, float, Fraction)) and not isinstance(v, bool):
        return v
    raise ValueError(f"not a probability value: {v!r}")


def _validate_masses(values: Iterable[Number], what: str) -> tuple[Number, ...]:
    vals = tuple(as_number(v) for v in values)
    for v in vals:
        if v < 0:
            raise ValueError(f"{what} violates nonnegativity: entry {v}")
    if all(_is_exact(v) for v in vals):
        if sum(vals) != 1:
            raise ValueError(f"{what} violates normalization: exact sum {sum(vals)} != 1")
    else:
        total = math.fsum(float(v) for v in vals)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"{what} violates normalization: sum {total!r} != 1")
    return vals


def _num_to_json(v: Number):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


@dataclass(frozen=True)
class SumPmf:
    """Pmf p = (p_0, ..., p_d) of a sum of d Bernoulli coordinates."""

    values: tuple[Number, ...]

    def __init__(self, values: Iterable[Number]):
        vals = _validate_masses(values, "SumPmf")
        if len(vals) < 2:
            raise ValueError("SumPmf needs at least d+1 = 2 entries")
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return len(self.values) - 1

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, v in enumerate(self.values) if v > 0)

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in self.values)

    def mean(self) -> Number:
        if self.exact:
            return sum(k * v for k, v in enumerate(self.values))
        return math.fsum(k * float(v) for k, v in enumerate(self.values))

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array([float(v) for v in self.values])
        a.flags.writeable = False
        return a

    def positive_masses(self) -> Iterator[Number]:
        return (v for v in self.values if v > 0)

    def to_floats(self) -> "SumPmf":
        return SumPmf(tuple(float(v) for v in self.values))

    def to_json_obj(self):
        return [_num_to_json(v) for v in self.values]

    @classmethod
    def from_json_obj(cls, obj) -> "SumPmf":
        if not isinstance(obj, list):
            raise ValueError("SumPmf JSON form is an array of numbers")
        return cls(obj)


@dataclass(frozen=True)
class JointPmf:
    """Dense pmf over {0,1}^d in reverse-lex index order (guarded to d <= 20)."""

    d: int
    values: tuple[Number, ...]

    def __init__(self, d: int, values: Iterable[Number]):
        _check_dimension(d)
        vals = _validate_masses(values, "JointPmf")
        if len(vals) != 1 << d:
            raise ValueError(f"JointPmf for d={d} needs 2^d = {1 << d} entries, got {len(vals)}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "values", vals)

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in self.values)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array([float(v) for v in self.values])
        a.flags.writeable = False
        return a

    def atoms(self) -> Iterator[tuple[int, Number]]:
        return ((i, v) for i, v in enumerate(self.values) if v > 0)

    def positive_masses(self) -> Iterator[Number]:
        return (v for v in self.values if v > 0)

    def to_sparse(self) -> "SparseJointPmf":
        return SparseJointPmf(self.d, tuple(self.atoms()))

    def to_json_obj(self):
        return {"d": self.d, "values": [_num_to_json(v) for v in self.values]}

    @classmethod
    def from_json_obj(cls, obj) -> "JointPmf":
        if not isinstance(obj, dict) or "d" not in obj or "values" not in obj:
            raise ValueError('JointPmf JSON form is {"d": ..., "values": [...]}')
        return cls(int(obj["d"]), obj["values"])


@dataclass(frozen=True)
class SparseJointPmf:
    """Support-indexed pmf over {0,1}^d; works for any d."""

    d: int
    atoms: tuple[tuple[int, Number], ...]

    def __init__(self, d: int, atoms: Iterable[tuple[int, Number]]):
        _check_dimension(d, dense=False)
        pairs = []
        seen = set()
        for idx, mass in atoms:
            idx = int(idx)
            mass = as_number(mass)
            if not 0 <= idx < (1 << d):
                raise ValueError(f"atom index {idx} out of range for d={d}")
            if idx in seen:
                raise ValueError(f"duplicate atom index {idx}")
            if mass <= 0:
                raise ValueError(f"atom masses must be positive, got {mass}")
            seen.add(idx)
            pairs.append((idx, mass))
        pairs.sort()
        masses = [m for _, m in pairs]
        if all(_is_exact(m) for m in masses):
            if sum(masses) != 1:
                raise ValueError(f"SparseJointPmf violates normalization: exact sum {sum(masses)} != 1")
        elif abs(math.fsum(float(m) for m in masses) - 1.0) > PROB_TOL:
            raise ValueError("SparseJointPmf violates normalization")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "atoms", tuple(pairs))

    @property
    def exact(self) -> bool:
        return all(_is_exact(m) for _, m in self.atoms)

    def positive_masses(self) -> Iterator[Number]:
        return (m for _, m in self.atoms)

    def to_dense(self) -> JointPmf:
        _check_dimension(self.d)
        values: list[Number] = [0] * (1 << self.d)
        for idx, mass in self.atoms:
            values[idx] = mass
        return JointPmf(self.d, values)

    def to_json_obj(self):
        return {"d": self.d, "atoms": [[i, _num_to_json(m)] for i, m in self.atoms]}

    @classmethod
    def from_json_obj(cls, obj) -> "SparseJointPmf":
        if not isinstance(obj, dict) or "d" not in obj or "atoms" not in obj:
            raise ValueError('SparseJointPmf JSON form is {"d": ..., "atoms": [[i, m], ...]}')
        return cls(int(obj["d"]), [(i, m) for i, m in obj["atoms"]])


AnyJoint = Union[JointPmf, SparseJointPmf]
AnyPmf = Union[SumPmf, JointPmf, SparseJointPmf]


def sum_map(f: AnyJoint) -> SumPmf:
    """Push a joint Bernoulli pmf through the coordinate-sum map."""
    d = f.d
    if isinstance(f, JointPmf):
        if f.exact:
            levels: list[Number] = [0] * (d + 1)
            for i, v in enumerate(f.values):
                levels[i.bit_count()] += v
            return SumPmf(levels)
        counts = np.bincount(_popcounts(d), weights=f.array, minlength=d + 1)
        return SumPmf(tuple(float(c) for c in counts))
    levels = [0] * (d + 1)
    for idx, mass in f.atoms:
        levels[level_weight(idx)] += mass
    if not all(_is_exact(m) for _, m in f.atoms):
        levels = [float(v) for v in levels]
    return SumPmf(levels)


def cross_moment(f: AnyJoint, subset: Iterable[int]) -> Number:
    """E[X_{j1} ... X_{jk}] for coordinates subset of {1, ..., d}."""
    coords = sorted(set(int(j) for j in subset))
    if not coords:
        raise ValueError("cross_moment needs a nonempty coordinate subset")
    if coords[0] < 1 or coords[-1] > f.d:
        raise ValueError(f"coordinates {coords} out of range for d={f.d}")
    mask = 0
    for j in coords:
        mask |= 1 << (j - 1)
    atoms = f.atoms() if isinstance(f, JointPmf) else f.atoms
    picked = [mass for idx, mass in atoms if idx & mask == mask]
    if picked and all(_is_exact(m) for m in picked):
        return sum(picked)
    return math.fsum(float(m) for m in picked)


def entropy(pmf: AnyPmf) -> float:
    """Shannon entropy in nats; zero atoms are skipped (0 log 0 = 0)."""
    return -math.fsum(float(m) * math.log(float(m)) for m in pmf.positive_masses())
