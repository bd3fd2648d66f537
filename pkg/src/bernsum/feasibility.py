"""Mean-constrained fibers: exact feasibility and vertex enumeration.

The fiber over p intersected with the class of fixed coordinate means theta
is the solution set of {sum-level rows, coordinate-mean rows, f >= 0}.  All
arithmetic here is exact rational: float inputs are converted to the exact
binary fraction they represent, so reference values in eighths survive the
round trip untouched.

Feasibility runs a phase-1 simplex with Bland's rule (no cycling); vertex
enumeration walks the graph of feasible bases, where two bases are adjacent
when they differ by one column swap that preserves feasibility.  For bounded
polytopes that graph is connected, so a breadth-first walk from any feasible
basis reaches every basic feasible solution; distinct solution vectors are
the vertices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .pmf import JointPmf, Number, SumPmf

FEASIBLE_D_MAX = 12
VERTEX_D_MAX = 5

_ZERO = Fraction(0)
_ONE = Fraction(1)


class InfeasibleError(ValueError):
    """Raised when an operation needs a nonempty constrained fiber."""


class BasisLimitError(RuntimeError):
    """Raised when vertex enumeration exceeds an explicit basis budget."""


def _as_fraction(v: Number) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(v)  # exact binary expansion of the float


@dataclass(frozen=True)
class MeanVector:
    """Prescribed coordinate means theta in [0,1]^d, held exactly."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Sequence[Number]):
        vals = tuple(_as_fraction(v) for v in values)
        if not vals:
            raise ValueError("mean vector needs at least one coordinate")
        for t in vals:
            if not 0 <= t <= 1:
                raise ValueError(f"coordinate means must lie in [0,1], got {t}")
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return len(self.values)

    def total(self) -> Fraction:
        return sum(self.values, _ZERO)


def _coerce_theta(theta) -> MeanVector:
    return theta if isinstance(theta, MeanVector) else MeanVector(theta)


def _exact_p(p: SumPmf) -> tuple[Fraction, ...]:
    vals = tuple(_as_fraction(v) for v in p.values)
    if sum(vals) != 1:
        # Floats that merely approximate a pmf get renormalized exactly.
        total = sum(vals)
        vals = tuple(v / total for v in vals)
    return vals


@dataclass(frozen=True)
class NecessaryConditions:
    mean_ok: bool
    box_ok: bool

    def __bool__(self) -> bool:
        return self.mean_ok and self.box_ok


def necessary_conditions(p: SumPmf, theta, tol: float = 1e-12) -> NecessaryConditions:
    """Check sum(theta) = mean(p) and the sharp mean box p_d <= theta_i <= 1 - p_0.

    Both box ends come from the order-1 cross-moment bounds: every coordinate
    mean is at least the all-ones mass and at most one minus the all-zeros
    mass, so a violation certifies an empty constrained fiber.
    """
    theta = _coerce_theta(theta)
    if theta.d != p.d:
        raise ValueError(f"dimension mismatch: theta has d={theta.d}, p has d={p.d}")
    pvals = _exact_p(p)
    mu = sum((k * v for k, v in enumerate(pvals)), _ZERO)
    slack = Fraction(tol) if tol else _ZERO
    mean_ok = abs(theta.total() - mu) <= slack
    lo, hi = pvals[-1], 1 - pvals[0]
    box_ok = all(lo - slack <= t <= hi + slack for t in theta.values)
    return NecessaryConditions(mean_ok=mean_ok, box_ok=box_ok)


@dataclass(frozen=True)
class ConstraintSystem:
    """Equality system A f = b over the 2^d atom masses, with f >= 0.

    Rows 0..d are the level-sum constraints, rows d+1..2d the coordinate-mean
    constraints; the feasible set is exactly the mean-constrained fiber.
    """

    d: int
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    @property
    def n_vars(self) -> int:
        return 1 << self.d

    def residual(self, f: JointPmf) -> tuple[Fraction, ...]:
        x = [_as_fraction(v) for v in f.values]
        return tuple(
            sum((a * xi for a, xi in zip(row, x)), _ZERO) - b
            for row, b in zip(self.matrix, self.rhs)
        )


def constraint_system(p: SumPmf, theta) -> ConstraintSystem:
    theta = _coerce_theta(theta)
    d = p.d
    if theta.d != d:
        raise ValueError(f"dimension mismatch: theta has d={theta.d}, p has d={p.d}")
    pvals = _exact_p(p)
    n = 1 << d
    rows = []
    rhs = []
    for k in range(d + 1):
        rows.append(tuple(_ONE if i.bit_count() == k else _ZERO for i in range(n)))
        rhs.append(pvals[k])
    for i in range(d):
        bit = 1 << i
        rows.append(tuple(_ONE if idx & bit else _ZERO for idx in range(n)))
        rhs.append(theta.values[i])
    return ConstraintSystem(d=d, matrix=tuple(rows), rhs=tuple(rhs))


def _reduced_system(p: SumPmf, theta: MeanVector):
    """Structurally eliminate forced-zero atoms, then list the live rows.

    Returns (columns, rows, rhs) over the surviving atom indices, or None
    when a forced elimination already contradicts a nonzero right-hand side.
    """
    d = p.d
    pvals = _exact_p(p)
    support = {k for k in range(d + 1) if pvals[k] > 0}
    zero_bits = [i for i in range(d) if theta.values[i] == 0]
    one_bits = [i for i in range(d) if theta.values[i] == 1]

    def alive(idx: int) -> bool:
        if idx.bit_count() not in support:
            return False
        if any(idx >> i & 1 for i in zero_bits):
            return False
        if any(not (idx >> i & 1) for i in one_bits):
            return False
        return True

    columns = [idx for idx in range(1 << d) if alive(idx)]
    col_pos = {idx: j for j, idx in enumerate(columns)}

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    for k in sorted(support):
        row = [_ZERO] * len(columns)
        hit = False
        for idx in columns:
            if idx.bit_count() == k:
                row[col_pos[idx]] = _ONE
                hit = True
        if not hit:
            return None  # level mass p_k > 0 with every carrier forced to zero
        rows.append(row)
        rhs.append(pvals[k])
    for i in range(d):
        t = theta.values[i]
        if t == 0 or t == 1:
            continue  # absorbed by the structural elimination
        bit = 1 << i
        row = [_ZERO] * len(columns)
        hit = False
        for idx in columns:
            if idx & bit:
                row[col_pos[idx]] = _ONE
                hit = True
        if not hit:
            return None  # theta_i > 0 but no surviving atom has coordinate i set
        rows.append(row)
        rhs.append(t)
    return columns, rows, rhs


def _phase1(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Exact phase-1 simplex.  Returns (R, s, basis) with R of full row rank
    and basis feasible for R f = s, f >= 0; or None when infeasible.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    T = []
    for i in range(m):
        if rhs[i] < 0:
            T.append([-a for a in rows[i]] + [_ZERO] * m + [-rhs[i]])
        else:
            T.append(list(rows[i]) + [_ZERO] * m + [rhs[i]])
        T[i][n + i] = _ONE
    basis = [n + i for i in range(m)]
    # Reduced-cost row for min(sum of artificials): z_j = c_j - sum_i T[i][j].
    width = n + m + 1
    z = [-sum(T[i][j] for i in range(m)) for j in range(width)]
    for j in range(n, n + m):
        z[j] += 1

    while True:
        enter = next((j for j in range(n) if z[j] < 0), None)  # Bland: lowest index,
        if enter is None:                                      # artificials barred
            break
        leave_row = None
        best = None
        for i in range(m):
            t = T[i][enter]
            if t > 0:
                ratio = T[i][-1] / t
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave_row]):
                    best = ratio
                    leave_row = i
        if leave_row is None:
            raise RuntimeError("unbounded phase-1 ray in a bounded system")
        _pivot(T, z, leave_row, enter)
        basis[leave_row] = enter

    if -z[-1] != 0:  # optimum of sum of artificials
        return None

    # Drive out (or drop) leftover artificial rows; their value is zero here.
    keep = []
    for i in range(m):
        if basis[i] < n:
            keep.append(i)
            continue
        enter = next((j for j in range(n) if T[i][j] != 0), None)
        if enter is None:
            continue  # redundant original row
        _pivot(T, z, i, enter)
        basis[i] = enter
        keep.append(i)
    R = [[T[i][j] for j in range(n)] for i in keep]
    s = [T[i][-1] for i in keep]
    return R, s, [basis[i] for i in keep]


def _pivot(T, z, row, col):
    pv = T[row][col]
    T[row] = [v / pv for v in T[row]]
    prow = T[row]
    for i in range(len(T)):
        if i != row and T[i][col] != 0:
            f = T[i][col]
            T[i] = [a - f * b for a, b in zip(T[i], prow)]
    if z[col] != 0:
        f = z[col]
        for j in range(len(z)):
            z[j] -= f * prow[j]


def _solve_basis(R, s, basis):
    """Gauss-Jordan tableau for a given basis; row i carries basis[i]."""
    r = len(R)
    T = [list(R[i]) + [s[i]] for i in range(r)]
    owner = [-1] * r
    for b in basis:
        prow = next((i for i in range(r) if owner[i] < 0 and T[i][b] != 0), None)
        if prow is None:
            return None
        owner[prow] = b
        pv = T[prow][b]
        T[prow] = [v / pv for v in T[prow]]
        for i in range(r):
            if i != prow and T[i][b] != 0:
                f = T[i][b]
                T[i] = [a - f * c for a, c in zip(T[i], T[prow])]
    order = sorted(range(r), key=lambda i: basis.index(owner[i]))
    return [T[i] for i in order]


def _enumerate_bases(R, s, basis0, max_bases=None):
    """All basic feasible solutions reachable by feasible single swaps."""
    r = len(R)
    n = len(R[0])
    start = tuple(sorted(basis0))
    seen = {start}
    queue = deque([start])
    solutions = {}
    visited = 0
    while queue:
        basis = queue.popleft()
        visited += 1
        if max_bases is not None and visited > max_bases:
            raise BasisLimitError(
                f"vertex enumeration exceeded max_bases={max_bases} "
                f"({len(solutions)} vertices found so far); degenerate instances "
                f"can have combinatorially many feasible bases"
            )
        T = _solve_basis(R, s, list(basis))
        xB = [T[i][-1] for i in range(r)]
        x = [_ZERO] * n
        for i, b in enumerate(basis):
            x[b] = xB[i]
        solutions[tuple(x)] = x
        in_basis = set(basis)
        for j in range(n):
            if j in in_basis:
                continue
            col = [T[i][j] for i in range(r)]
            for i in range(r):
                if col[i] == 0:
                    continue
                step = xB[i] / col[i]
                if step < 0:
                    continue
                if step > 0 and any(xB[k] - step * col[k] < 0 for k in range(r)):
                    continue
                nb = tuple(sorted(in_basis - {basis[i]} | {j}))
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    return [solutions[key] for key in sorted(solutions)]


def _solve(p: SumPmf, theta: MeanVector):
    reduced = _reduced_system(p, theta)
    if reduced is None:
        return None
    columns, rows, rhs = reduced
    if not rows:
        return None
    got = _phase1(rows, rhs)
    if got is None:
        return None
    return columns, got


def _to_joint(d: int, columns, x) -> JointPmf:
    values: list[Number] = [_ZERO] * (1 << d)
    for idx, v in zip(columns, x):
        values[idx] = v
    return JointPmf(d, values)


def feasible_point(p: SumPmf, theta) -> Optional[JointPmf]:
    """An exact element of the mean-constrained fiber, or None if empty."""
    theta = _coerce_theta(theta)
    d = p.d
    if theta.d != d:
        raise ValueError(f"dimension mismatch: theta has d={theta.d}, p has d={p.d}")
    if d > FEASIBLE_D_MAX:
        raise ValueError(f"feasible_point is limited to d <= {FEASIBLE_D_MAX}")
    got = _solve(p, theta)
    if got is None:
        return None
    columns, (R, s, basis) = got
    x = [_ZERO] * len(columns)
    for i, b in enumerate(basis):
        x[b] = s[i]
    return _to_joint(d, columns, x)


def constrained_vertices(p: SumPmf, theta, max_bases: int | None = None) -> list[JointPmf]:
    """Every vertex of the mean-constrained fiber, exact and deduplicated.

    The enumeration is exhaustive over feasible bases, so its cost is the
    combinatorics of the instance, not just d: a generic d=5 fiber has
    thousands of vertices (minutes of exact arithmetic), and degenerate ones
    (symmetric p with exchangeable theta) can be far larger.  Pass max_bases
    to fail fast with BasisLimitError instead of running to completion.
    """
    theta = _coerce_theta(theta)
    d = p.d
    if theta.d != d:
        raise ValueError(f"dimension mismatch: theta has d={theta.d}, p has d={p.d}")
    if d > VERTEX_D_MAX:
        raise ValueError(f"constrained_vertices is limited to d <= {VERTEX_D_MAX}")
    got = _solve(p, theta)
    if got is None:
        return []
    columns, (R, s, basis) = got
    return [_to_joint(d, columns, x) for x in _enumerate_bases(R, s, basis, max_bases)]


def constrained_moment_bounds(p: SumPmf, theta, subset, max_bases: int | None = None) -> tuple[Number, Number]:
    """Sharp cross-moment range over the mean-constrained fiber.

    Moments are linear in f, so scanning the vertices is exact.  Raises
    InfeasibleError when the fiber is empty (there is nothing to bound).
    """
    from .pmf import cross_moment

    vertices = constrained_vertices(p, theta, max_bases)
    if not vertices:
        raise InfeasibleError("the mean-constrained fiber is empty")
    moments = [cross_moment(v, subset) for v in vertices]
    return min(moments), max(moments)
