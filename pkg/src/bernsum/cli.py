"""Command-line front end: reproducible, machine-readable output.

Every subcommand prints JSON (or CSV via --format csv) on stdout and
diagnostics on stderr, exits 0 on success and 2 on validation problems with
the violated invariant named.  Stochastic subcommands take --seed; when it
is omitted a fresh seed is drawn and recorded in the output so any run can
be replayed.
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import secrets
import sys
from fractions import Fraction

from .binomial import bin_vs_mode, curve_log_measure
from .feasibility import (
    BasisLimitError,
    InfeasibleError,
    constrained_moment_bounds,
    constrained_vertices,
    feasible_point,
)
from .measure import (
    LogMeasure,
    density_l,
    dirichlet_pdf,
    maximal_pmf,
    normalizing_constant,
    polytope_measure,
)
from .pmf import SumPmf, entropy
from .polytope import (
    entropy_bounds,
    extremal_enumerate,
    extremal_indices,
    moment_bounds,
)
from .sampling import (
    NeighborhoodSpec,
    RngStream,
    estimate_neighborhood_measure,
    estimate_tv_neighborhood_bound,
    sample_polytope_uniform,
)

LN2 = math.log(2.0)


def _parse_json_or_file(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if os.path.exists(text):
            with open(text) as fh:
                return json.load(fh)
        raise ValueError(f"not valid inline JSON and not a readable file: {text!r}")


def _load_sum_pmf(text: str) -> SumPmf:
    return SumPmf.from_json_obj(_parse_json_or_file(text))


def _load_theta(text: str) -> list:
    obj = _parse_json_or_file(text)
    if not isinstance(obj, list):
        raise ValueError("theta must be a JSON array of means")
    return [Fraction(t) if isinstance(t, str) else t for t in obj]


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def _log_or_none(m: LogMeasure):
    return None if m.is_zero else m.log


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record))
    else:
        keys = list(record)
        print(",".join(keys))
        print(",".join("" if record[k] is None else str(record[k]) for k in keys))


def _emit_rows(rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(rows))
        return
    if not rows:
        return
    keys = list(rows[0])
    print(",".join(keys))
    for row in rows:
        print(",".join("" if row[k] is None else str(row[k]) for k in keys))


def _require_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return secrets.randbits(63)


def _cmd_extremals(args) -> int:
    p = _load_sum_pmf(args.p)
    stream = zip(extremal_indices(p), extremal_enumerate(p))
    stop = args.offset + args.limit if args.limit is not None else None
    for sigma, vertex in itertools.islice(stream, args.offset, stop):
        record = {
            "sigma": list(sigma.sigma),
            "pmf": {"d": vertex.d, "atoms": [[i, _jsonable(m)] for i, m in vertex.atoms]},
        }
        print(json.dumps(record))
    return 0


def _cmd_bounds(args) -> int:
    p = _load_sum_pmf(args.p)
    lower, upper = moment_bounds(p, args.order)
    _emit({"order": args.order, "lower": _jsonable(lower), "upper": _jsonable(upper)}, args.format)
    return 0


def _cmd_entropy_bounds(args) -> int:
    p = _load_sum_pmf(args.p)
    lo, hi = entropy_bounds(p)
    unit = "bits" if args.bits else "nats"
    if args.bits:
        lo, hi = lo / LN2, hi / LN2
    _emit({"min": lo, "max": hi, "unit": unit}, args.format)
    return 0


def _cmd_feasible(args) -> int:
    p = _load_sum_pmf(args.p)
    witness = feasible_point(p, _load_theta(args.theta))
    record: dict = {"feasible": witness is not None}
    if witness is not None:
        record["witness"] = witness.to_json_obj()
    print(json.dumps(record))
    return 0


def _cmd_constrained_vertices(args) -> int:
    p = _load_sum_pmf(args.p)
    for vertex in constrained_vertices(p, _load_theta(args.theta), max_bases=args.max_bases):
        print(json.dumps(vertex.to_json_obj()))
    return 0


def _cmd_constrained_bounds(args) -> int:
    p = _load_sum_pmf(args.p)
    subset = [int(tok) for tok in args.subset.split(",") if tok]
    lower, upper = constrained_moment_bounds(p, _load_theta(args.theta), subset)
    _emit(
        {"subset": "|".join(str(j) for j in subset),
         "lower": _jsonable(lower), "upper": _jsonable(upper)},
        args.format,
    )
    return 0


def _cmd_measure(args) -> int:
    p = _load_sum_pmf(args.p)
    measures = polytope_measure(p)
    _emit(
        {
            "log_ambient": _log_or_none(measures["ambient"]),
            "log_intrinsic": _log_or_none(measures["intrinsic"]),
            "log_density": _log_or_none(density_l(p)),
            "dirichlet_pdf": dirichlet_pdf(p),
            "log_normalizing_constant": normalizing_constant(p.d).log,
        },
        args.format,
    )
    return 0


def _cmd_mode(args) -> int:
    p = maximal_pmf(args.d)
    if args.format == "json":
        print(json.dumps({"p": [_jsonable(float(v)) for v in p.values]}))
    else:
        _emit({f"p{k}": float(v) for k, v in enumerate(p.values)}, args.format)
    return 0


def _cmd_density(args) -> int:
    p = _load_sum_pmf(args.p)
    _emit(
        {"log_density": _log_or_none(density_l(p)),
         "dirichlet_pdf": dirichlet_pdf(p),
         "entropy_nats": entropy(p)},
        args.format,
    )
    return 0


def _cmd_sample(args) -> int:
    p = _load_sum_pmf(args.p)
    seed = _require_seed(args)
    gen = RngStream(seed, 0).generator()
    print(json.dumps({"seed": seed, "n": args.n, "d": p.d}))
    for _ in range(args.n):
        f = sample_polytope_uniform(p, gen)
        print(json.dumps(f.to_json_obj()))
    return 0


def _cmd_neighborhood(args) -> int:
    p = _load_sum_pmf(args.p)
    seed = _require_seed(args)
    spec = NeighborhoodSpec(
        center=p, epsilon=args.eps, metric=args.metric, paper_region=args.paper_sigma_s
    )
    rng = RngStream(seed, 0)
    if args.metric == "sup":
        report = estimate_neighborhood_measure(spec, args.n, rng, threads=args.threads)
    else:
        report = estimate_tv_neighborhood_bound(spec, args.n, rng, threads=args.threads)
    _emit(
        {
            "metric": args.metric,
            "epsilon": args.eps,
            "seed": seed,
            "n": report.n_samples,
            "log_estimate": _log_or_none(report.point_estimate),
            "estimate": report.point_estimate.value,
            "std_error": report.std_error,
            "acceptance_rate": report.acceptance_rate,
            "se_volume": report.se_volume,
            "se_density": report.se_density,
        },
        args.format,
    )
    return 0


def _cmd_binomial_scan(args) -> int:
    if args.points < 2:
        raise ValueError("need at least 2 scan points")
    rows = []
    for j in range(args.points):
        theta = j / (args.points - 1)
        m = curve_log_measure(theta, args.d)
        rows.append({"theta": theta, "log_measure": None if m.is_zero else m.log})
    _emit_rows(rows, args.format)
    return 0


def _cmd_bin_vs_mode(args) -> int:
    rows = []
    for d in range(2, args.dmax + 1):
        r = bin_vs_mode(d)
        rows.append({"d": d, "d_sup": r["d_sup"], "log_measure_gap": r["log_measure_gap"]})
    _emit_rows(rows, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernsum",
        description="Geometry of Bernoulli sum classes: vertices, bounds, measures, sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        return sp

    sp = add("extremals", _cmd_extremals, help="stream the vertices of the fiber over p")
    sp.add_argument("--p", required=True, help="sum pmf: inline JSON array or file path")
    sp.add_argument("--limit", type=int, default=None)
    sp.add_argument("--offset", type=int, default=0)

    sp = add("bounds", _cmd_bounds, help="sharp cross-moment bounds of a given order")
    sp.add_argument("--p", required=True)
    sp.add_argument("--order", type=int, required=True)

    sp = add("entropy-bounds", _cmd_entropy_bounds, help="entropy range over the fiber")
    sp.add_argument("--p", required=True)
    sp.add_argument("--bits", action="store_true", help="report in bits instead of nats")

    sp = add("feasible", _cmd_feasible, help="decide whether the mean-constrained fiber is nonempty")
    sp.add_argument("--p", required=True)
    sp.add_argument("--theta", required=True, help="mean vector: inline JSON array or file path")

    sp = add("constrained-vertices", _cmd_constrained_vertices,
             help="exact vertices of the mean-constrained fiber")
    sp.add_argument("--p", required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--max-bases", type=int, default=None,
                    help="abort with an error if the basis walk exceeds this budget")

    sp = add("constrained-bounds", _cmd_constrained_bounds,
             help="cross-moment bounds over the mean-constrained fiber")
    sp.add_argument("--p", required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--subset", required=True, help="comma-separated coordinates, e.g. 1,2")

    sp = add("measure", _cmd_measure, help="Hausdorff measures and density at p")
    sp.add_argument("--p", required=True)

    sp = add("mode", _cmd_mode, help="the sum pmf with the largest fiber measure")
    sp.add_argument("--d", type=int, required=True)

    sp = add("density", _cmd_density, help="fiber density and Dirichlet pdf at p")
    sp.add_argument("--p", required=True)

    sp = add("sample", _cmd_sample, help="uniform draws from the fiber over p (JSON lines)")
    sp.add_argument("--p", required=True)
    sp.add_argument("-n", type=int, default=10)
    sp.add_argument("--seed", type=int, default=None)

    sp = add("neighborhood", _cmd_neighborhood, help="Monte Carlo measure of a metric ball")
    sp.add_argument("--p", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--metric", choices=("sup", "tv"), default="sup")
    sp.add_argument("-n", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--paper-sigma-s", action="store_true",
                    help="use the looser parameterized region without the last-coordinate window")

    sp = add("binomial-scan", _cmd_binomial_scan, help="(theta, log fiber measure) table")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--points", type=int, default=101)

    sp = add("bin-vs-mode", _cmd_bin_vs_mode, help="distance of b(1/2) from the maximal pmf by dimension")
    sp.add_argument("--dmax", type=int, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, InfeasibleError, BasisLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
