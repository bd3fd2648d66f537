"""Seeded random generation over the sum simplex and the fibers.

All draws flow from (seed, stream_id) pairs through counter-based child
sequences, so estimates are bit-identical across reruns and across worker
counts: work is split into fixed-size chunks, chunk i always uses the child
sequence [seed, stream_id, i], and chunk results merge in index order.

The neighborhood region around a sum pmf p at sup-radius eps is an axis box
over the d free coordinates intersected with a window on the last coordinate
1 - sum(x).  By default that window is enforced, so sampled points satisfy
the sup constraint on every coordinate; `paper_region=True` switches to the
looser compatibility set that keeps only sum(x) <= 1.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .indexing import level_indices
from .measure import LN2, LogMeasure
from .pmf import JointPmf, SumPmf

CHUNK = 1 << 14

_TINY = 1e-300


@dataclass(frozen=True)
class RngStream:
    """Reproducible random source: same (seed, stream_id) -> same draws."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed, self.stream_id])))

    def chunk_generator(self, chunk: int) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed, self.stream_id, chunk]))
        )


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"rng must be an RngStream or numpy Generator, got {type(rng)!r}")


@dataclass(frozen=True)
class NeighborhoodSpec:
    """A metric ball around a sum pmf: center, radius, and which distance."""

    center: SumPmf
    epsilon: float
    metric: str = "sup"
    paper_region: bool = False

    def __post_init__(self):
        if self.metric not in ("sup", "tv"):
            raise ValueError(f"metric must be 'sup' or 'tv', got {self.metric!r}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def d(self) -> int:
        return self.center.d

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-coordinate sup-window [max(p_j - eps, 0), min(p_j + eps, 1)]."""
        p = self.center.array
        lo = np.maximum(p - self.epsilon, 0.0)
        hi = np.minimum(p + self.epsilon, 1.0)
        return lo, hi

    def last_window(self) -> tuple[float, float]:
        lo, hi = self.bounds()
        if self.paper_region:
            return 0.0, 1.0
        return float(lo[-1]), float(hi[-1])


@dataclass(frozen=True)
class EstimateReport:
    """A Monte Carlo estimate with its first-order error breakdown.

    std_error combines the region-volume stage and the mean-density stage by
    error propagation on the product; the two components are also reported
    in the same units as the point estimate.
    """

    point_estimate: LogMeasure
    std_error: float
    n_samples: int
    acceptance_rate: float
    se_volume: float = 0.0
    se_density: float = 0.0

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")
        if not 0 <= self.acceptance_rate <= 1:
            raise ValueError("acceptance_rate must lie in [0,1]")


def sample_uniform_simplex(n: int, rng) -> np.ndarray:
    """Uniform draw from the standard n-simplex (n+1 coordinates summing to 1)."""
    if n < 0:
        raise ValueError(f"simplex dimension must be >= 0, got {n}")
    g = _as_generator(rng)
    if n == 0:
        return np.ones(1)
    while True:
        e = g.standard_exponential(n + 1)
        total = e.sum()
        if total > 0:
            return e / total


def sample_dirichlet(alpha: Sequence[float], rng) -> np.ndarray:
    """Dirichlet draw via normalized gammas, valid for every alpha > 0."""
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise ValueError("alpha must be a vector with at least two entries")
    if np.any(a <= 0):
        raise ValueError("Dirichlet parameters must be positive")
    g = _as_generator(rng)
    while True:
        gam = g.standard_gamma(a)
        total = gam.sum()
        if total > 0:
            return gam / total


def sample_polytope_uniform(p: SumPmf, rng) -> JointPmf:
    """Uniform draw from the fiber over p, blockwise by its product structure."""
    d = p.d
    g = _as_generator(rng)
    values = np.zeros(1 << d)
    for k in p.support:
        size = math.comb(d, k)
        block = sample_uniform_simplex(size - 1, g) if size > 1 else np.ones(1)
        values[list(level_indices(d, k))] = float(p.values[k]) * block
    return JointPmf(d, tuple(values))


def sample_Fd_uniform(d: int, rng) -> JointPmf:
    """Uniform draw from the full simplex of joint Bernoulli pmfs."""
    values = sample_uniform_simplex((1 << d) - 1, _as_generator(rng))
    return JointPmf(d, tuple(values))


def _interior_start(spec: NeighborhoodSpec) -> np.ndarray:
    d = spec.d
    p = spec.center.array
    alpha = 0.5 * min(spec.epsilon, 1.0)
    blended = (1.0 - alpha) * p + alpha / (d + 1)
    return blended[:-1].copy()


def hit_and_run(
    spec: NeighborhoodSpec,
    burn_in: int = 1000,
    thin: int = 10,
    rng: RngStream | np.random.Generator | None = None,
) -> Iterator[SumPmf]:
    """Markov chain with uniform stationary law on the sup-ball around p.

    Walks the d free coordinates (the last one is 1 - sum); each step picks a
    random direction, intersects it with the region, and jumps uniformly on
    the chord.  Yields after burn_in, then every thin-th state.  Every point
    emitted satisfies the region inequalities as floats.
    """
    if spec.metric != "sup":
        raise ValueError("hit_and_run samples the sup-metric region only")
    if burn_in < 0 or thin < 1:
        raise ValueError("burn_in must be >= 0 and thin >= 1")
    if rng is None:
        raise ValueError("hit_and_run needs an explicit rng")
    g = _as_generator(rng)
    d = spec.d
    lo_all, hi_all = spec.bounds()
    lo, hi = lo_all[:d], hi_all[:d]
    lo_d, hi_d = spec.last_window()
    x = np.clip(_interior_start(spec), lo, hi)

    def feasible(v: np.ndarray) -> bool:
        last = 1.0 - v.sum()
        return lo_d <= last <= hi_d

    def step(v: np.ndarray) -> np.ndarray:
        u = g.standard_normal(d)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return v
        u /= norm
        t_lo, t_hi = -np.inf, np.inf
        for j in range(d):
            if abs(u[j]) < 1e-14:
                continue
            a = (lo[j] - v[j]) / u[j]
            b = (hi[j] - v[j]) / u[j]
            if a > b:
                a, b = b, a
            t_lo, t_hi = max(t_lo, a), min(t_hi, b)
        usum = u.sum()
        if abs(usum) > 1e-14:
            s = v.sum()
            a = ((1.0 - hi_d) - s) / usum
            b = ((1.0 - lo_d) - s) / usum
            if a > b:
                a, b = b, a
            t_lo, t_hi = max(t_lo, a), min(t_hi, b)
        if not (np.isfinite(t_lo) and np.isfinite(t_hi)) or t_hi < t_lo:
            return v
        t = g.uniform(t_lo, t_hi)
        cand = np.clip(v + t * u, lo, hi)
        return cand if feasible(cand) else v

    for _ in range(burn_in):
        x = step(x)
    while True:
        for _ in range(thin):
            x = step(x)
        yield SumPmf(tuple(x) + (1.0 - x.sum(),))


@dataclass(frozen=True)
class _RegionDraws:
    """Sufficient statistics of one rejection run against the bounding box."""

    n: int
    log_box: float
    box_vol: float
    m_sup: int
    logl_sup: np.ndarray
    m_tv: int
    logl_tv: np.ndarray


def _density_log_terms(d: int) -> tuple[np.ndarray, np.ndarray, float]:
    n_k = np.array([math.comb(d, k) - 1 for k in range(d + 1)], dtype=float)
    cols = np.flatnonzero(n_k > 0)
    const = float(sum(math.lgamma(v + 1.0) for v in n_k[cols]))
    return n_k, cols, const


def _chunk_counts(n: int) -> list[int]:
    counts = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        counts.append(n % CHUNK)
    return counts


def _region_mc(spec: NeighborhoodSpec, n: int, rng: RngStream, threads: int = 1) -> _RegionDraws:
    if not isinstance(rng, RngStream):
        raise TypeError("estimators need an RngStream so chunks stay reproducible")
    if n < 1:
        raise ValueError("need at least one draw")
    d = spec.d
    lo_all, hi_all = spec.bounds()
    lo, hi = lo_all[:d], hi_all[:d]
    lo_d, hi_d = spec.last_window()
    widths = hi - lo
    if np.any(widths <= 0):
        raise ValueError("degenerate bounding box; epsilon must be positive")
    log_box = float(np.log(widths).sum())
    box_vol = float(np.exp(log_box))
    n_k, cols, const = _density_log_terms(d)
    want_tv = spec.metric == "tv"
    eps = spec.epsilon
    p_full = spec.center.array

    def run_chunk(args):
        chunk_idx, count = args
        g = rng.chunk_generator(chunk_idx)
        X = g.uniform(lo, hi, size=(count, d))
        last = 1.0 - X.sum(axis=1)
        acc = (last >= lo_d) & (last <= hi_d)
        P = np.column_stack([X[acc], last[acc]])
        with np.errstate(divide="ignore"):
            logl = (np.log(P[:, cols]) * n_k[cols]).sum(axis=1) - const
        if want_tv:
            tv = 0.5 * np.abs(P - p_full).sum(axis=1)
            keep = tv <= eps
            return int(acc.sum()), logl, int(keep.sum()), logl[keep]
        return int(acc.sum()), logl, 0, logl[:0]

    jobs = list(enumerate(_chunk_counts(n)))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_chunk, jobs))
    else:
        parts = [run_chunk(j) for j in jobs]

    m_sup = sum(p[0] for p in parts)
    logl_sup = np.concatenate([p[1] for p in parts]) if parts else np.empty(0)
    m_tv = sum(p[2] for p in parts)
    logl_tv = np.concatenate([p[3] for p in parts]) if parts else np.empty(0)
    return _RegionDraws(
        n=n, log_box=log_box, box_vol=box_vol,
        m_sup=m_sup, logl_sup=logl_sup, m_tv=m_tv, logl_tv=logl_tv,
    )


def region_volume(spec: NeighborhoodSpec, n: int, rng: RngStream, threads: int = 1) -> EstimateReport:
    """Surface volume of the sup-ball: sqrt(d+1) times the parameterized
    Lebesgue volume, estimated by rejection from the bounding box."""
    if spec.metric != "sup":
        raise ValueError("region_volume is defined for the sup metric")
    draws = _region_mc(spec, n, rng, threads)
    d = spec.d
    acc = draws.m_sup / draws.n
    scale = math.sqrt(d + 1) * draws.box_vol
    se = scale * math.sqrt(max(acc * (1.0 - acc), 0.0) / draws.n)
    if draws.m_sup == 0:
        return EstimateReport(LogMeasure.zero(), se, draws.n, 0.0, se_volume=se)
    est = LogMeasure.from_log(0.5 * math.log(d + 1) + draws.log_box + math.log(acc))
    return EstimateReport(est, se, draws.n, acc, se_volume=se)


def _logsumexp(a: np.ndarray) -> float:
    shift = float(a.max())
    if shift == float("-inf"):
        return float("-inf")
    return shift + math.log(float(np.exp(a - shift).sum()))


def _measure_report(draws: _RegionDraws, d: int, m: int, logl: np.ndarray) -> EstimateReport:
    n = draws.n
    acc = m / n
    if m == 0:
        return EstimateReport(LogMeasure.zero(), 0.0, n, 0.0)
    log_est = 0.5 * d * LN2 + draws.log_box - math.log(n) + _logsumexp(logl)
    if not math.isfinite(log_est):  # every accepted point sat on a zero-density face
        return EstimateReport(LogMeasure.zero(), 0.0, n, acc)
    # Delta method on (volume stage) x (mean-density stage).
    se_v_rel = math.sqrt(max((1.0 - acc), 0.0) / (acc * n))
    shift = float(logl.max())
    w = np.exp(logl - shift)
    mean_w = float(w.mean())
    sd_w = float(w.std(ddof=1)) if m > 1 else 0.0
    se_l_rel = sd_w / (mean_w * math.sqrt(m)) if mean_w > 0 else 0.0
    est_lin = math.exp(log_est) if log_est > math.log(_TINY) else 0.0
    se = est_lin * math.hypot(se_v_rel, se_l_rel)
    return EstimateReport(
        LogMeasure.from_log(log_est), se, n, acc,
        se_volume=est_lin * se_v_rel, se_density=est_lin * se_l_rel,
    )


def estimate_neighborhood_measure(
    spec: NeighborhoodSpec, n: int, rng: RngStream, threads: int = 1
) -> EstimateReport:
    """Induced measure of the sup-ball around the center.

    Averages the fiber density over uniform draws from the region and scales
    by the region volume in the sqrt(2^d)-normalized parameterization, so at
    eps >= 1 the estimate converges to the full normalizing constant.
    """
    if spec.metric != "sup":
        raise ValueError("this estimator handles the sup metric; see the tv bound")
    if n < 1000:
        raise ValueError("need at least 10^3 draws for a meaningful estimate")
    draws = _region_mc(spec, n, rng, threads)
    return _measure_report(draws, spec.d, draws.m_sup, draws.logl_sup)


def estimate_tv_neighborhood_bound(
    spec: NeighborhoodSpec, n: int, rng: RngStream, threads: int = 1
) -> EstimateReport:
    """Induced measure of the TV-ball, by rejection inside the sup-ball.

    The TV-ball sits inside the sup-ball of the same radius, so on identical
    seeds this estimate never exceeds the sup estimate.
    """
    if spec.metric != "tv":
        raise ValueError("this estimator handles the tv metric")
    if n < 1000:
        raise ValueError("need at least 10^3 draws for a meaningful estimate")
    draws = _region_mc(spec, n, rng, threads)
    return _measure_report(draws, spec.d, draws.m_tv, draws.logl_tv)
