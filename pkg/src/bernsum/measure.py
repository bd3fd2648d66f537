"""Hausdorff measures of the fibers and the induced law on the sum simplex.

Everything is carried in log space with an explicit zero flag: the ambient
fiber dimension is 2^d - d - 1 and the factorials involved overflow any
fixed-width float long before d reaches the dense guard.

Conventions pinned here and relied on by the samplers and the quadrature
oracle: the total mass of the induced measure is sqrt(2^d) / (2^d - 1)!, and
integrals of the density over parameterized regions carry the same sqrt(2^d)
change-of-variables factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .pmf import SumPmf

LN2 = math.log(2.0)


@dataclass(frozen=True)
class LogMeasure:
    """A nonnegative real stored as its natural log, with exact zero."""

    log_value: float
    is_zero: bool = False

    @classmethod
    def from_value(cls, v: float) -> "LogMeasure":
        if v < 0:
            raise ValueError(f"measures are nonnegative, got {v}")
        if v == 0:
            return cls.zero()
        return cls(math.log(v))

    @classmethod
    def from_log(cls, lv: float) -> "LogMeasure":
        return cls(lv)

    @classmethod
    def zero(cls) -> "LogMeasure":
        return cls(float("-inf"), True)

    @classmethod
    def one(cls) -> "LogMeasure":
        return cls(0.0)

    @property
    def log(self) -> float:
        return float("-inf") if self.is_zero else self.log_value

    @property
    def value(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log_value)

    def __mul__(self, other: "LogMeasure") -> "LogMeasure":
        if self.is_zero or other.is_zero:
            return LogMeasure.zero()
        return LogMeasure(self.log_value + other.log_value)

    def __truediv__(self, other: "LogMeasure") -> "LogMeasure":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero measure")
        if self.is_zero:
            return LogMeasure.zero()
        return LogMeasure(self.log_value - other.log_value)


def simplex_hausdorff(n: int, side_param: float) -> LogMeasure:
    """Surface measure p^n sqrt(n+1) / n! of the n-simplex scaled by p.

    A zero-dimensional simplex is a point and has measure 1 whatever p is.
    """
    if n < 0:
        raise ValueError(f"simplex dimension must be >= 0, got {n}")
    if side_param < 0:
        raise ValueError(f"side parameter must be >= 0, got {side_param}")
    if n == 0:
        return LogMeasure.one()
    if side_param == 0:
        return LogMeasure.zero()
    lv = n * math.log(float(side_param)) + 0.5 * math.log(n + 1) - math.lgamma(n + 1)
    return LogMeasure(lv)


def polytope_measure(p: SumPmf) -> dict[str, LogMeasure]:
    """Ambient and intrinsic Hausdorff measures of the fiber over p.

    Ambient multiplies over every level (a missing level with a nontrivial
    block forces zero); intrinsic multiplies over the support only.
    """
    d = p.d
    ambient = LogMeasure.one()
    intrinsic = LogMeasure.one()
    for k in range(d + 1):
        n_k = math.comb(d, k) - 1
        block = simplex_hausdorff(n_k, float(p.values[k]))
        ambient = ambient * block
        if p.values[k] > 0:
            intrinsic = intrinsic * block
    return {"ambient": ambient, "intrinsic": intrinsic}


def density_l(p: SumPmf) -> LogMeasure:
    """Fiber-measure density prod_k p_k^{n_k} / n_k! with 0^0 = 1."""
    d = p.d
    lv = 0.0
    for k in range(d + 1):
        n_k = math.comb(d, k) - 1
        if n_k == 0:
            continue
        pk = float(p.values[k])
        if pk == 0.0:
            return LogMeasure.zero()
        lv += n_k * math.log(pk) - math.lgamma(n_k + 1)
    return LogMeasure(lv)


def normalizing_constant(d: int) -> LogMeasure:
    """Total mass sqrt(2^d) / (2^d - 1)! of the induced measure."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return LogMeasure(0.5 * d * LN2 - math.lgamma(1 << d))


def dirichlet_pdf(p: SumPmf) -> float:
    """Density of the normalized induced law at p: Dirichlet with alpha_k = C(d,k).

    Evaluated with respect to Lebesgue measure on the d free coordinates; on
    the boundary it is 0 wherever a vanishing p_k carries alpha_k > 1.
    """
    d = p.d
    lv = math.lgamma(1 << d)
    for k in range(d + 1):
        alpha = math.comb(d, k)
        lv -= math.lgamma(alpha)
        if alpha == 1:
            continue
        pk = float(p.values[k])
        if pk == 0.0:
            return 0.0
        lv += (alpha - 1) * math.log(pk)
    return math.exp(lv)


def maximal_pmf(d: int) -> SumPmf:
    """The sum pmf whose fiber has the largest measure: the Dirichlet mode.

    Entries (C(d,k) - 1) / (2^d - d - 1), exact rationals.  Undefined for
    d < 2, where every fiber is a point set of measure 1.
    """
    if d < 2:
        raise ValueError("the maximal pmf needs d >= 2; below that all fibers have equal measure")
    denom = (1 << d) - d - 1
    return SumPmf(tuple(Fraction(math.comb(d, k) - 1, denom) for k in range(d + 1)))


def _check_pair(p: SumPmf, q: SumPmf) -> None:
    if p.d != q.d:
        raise ValueError(f"dimension mismatch: {p.d} vs {q.d}")


def dist_tv(p: SumPmf, q: SumPmf) -> float:
    """Total variation distance, half the l1 gap of the sum pmfs."""
    _check_pair(p, q)
    return 0.5 * math.fsum(abs(float(a) - float(b)) for a, b in zip(p.values, q.values))


def dist_sup(p: SumPmf, q: SumPmf) -> float:
    """Largest coordinate gap between two sum pmfs."""
    _check_pair(p, q)
    return max(abs(float(a) - float(b)) for a, b in zip(p.values, q.values))
