"""Command line front end: ``iselab <subcommand> [options]``.

Every run writes its full configuration and the library version next to
the results, so any artifact can be regenerated from its own header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from . import __version__
from .asymptotics import (
    DEFAULT_K1,
    DEFAULT_K2,
    k1_threshold,
    k2_threshold,
    kasahara_convert,
    log_a_asymptote,
    log_eta_moment_asymptote,
    log_mgf_asymptote_eta,
    log_mgf_series,
    log_s_moment_asymptote,
    log_xi_moment_asymptote,
    tail_bound_eta,
    tail_bound_s,
    CannotCertify,
)
from .beta import BetaCertificate, beta_coarse, beta_refined, certify_beta
from .exact import ExactConstant
from .montecarlo import RNG_ALGORITHM, default_seed, make_report
from .moments import gaussian_even_moment, moment_table

DEFAULT_MAX_K_CAP = 500
SQRT_PI_8 = math.sqrt(math.pi / 8)


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    format: str = "table"
    workers: int = 1
    rng: str = RNG_ALGORITHM


@dataclass
class Output:
    columns: list[str]
    rows: list[list]
    extra: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def sci(c: ExactConstant, digits: int = 12) -> str:
    """Scientific notation of an exact constant, safe for any magnitude."""
    if not c:
        return "0"
    enclosure = c.interval(bits=4 * digits + 16)
    mid = enclosure.midpoint
    with localcontext() as ctx:
        ctx.prec = digits + 2
        value = Decimal(mid.numerator) / Decimal(mid.denominator)
    return f"{value:.{digits - 1}e}"


def _frac(x: Fraction, limit: int = 60) -> str:
    """Exact rational, or a pointer to the certificate when it is unwieldy."""
    text = str(x)
    return text if len(text) <= limit else f"<{len(text)}-char rational, see certificate>"


def _floats(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty grid")
    return values


def _ints(text: str) -> list[int]:
    values = _floats(text)
    if any(v != int(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected integers: {text!r}")
    return [int(v) for v in values]


def _beta_value(n: int = 20) -> float:
    return float(beta_refined(n).midpoint)


# subcommands --------------------------------------------------------------------

def cmd_moments(args) -> Output:
    if args.max_k < 1:
        raise SystemExit("--max-k must be >= 1")
    if args.max_k > args.cap:
        raise SystemExit(f"--max-k {args.max_k} exceeds the cap {args.cap} (raise it with --cap)")
    table = moment_table(args.max_k)
    rows = []
    for k in range(1, args.max_k + 1):
        eta, s = table.eta(k), table.s_even(k)
        rows.append([
            k, table.a_k(k), _frac(table.b_k(k)), sci(ExactConstant(table.b_k(k)), args.digits),
            str(eta), sci(eta, args.digits), str(s), sci(s, args.digits),
        ])
    b = table.b
    checks = {
        "a1_is_1": table.a_k(1) == 1,
        "b_increasing_from_3": all(b[k] > b[k - 1] for k in range(3, len(b))),
        "b_below_1_from_2": all(x < 1 for x in b[1:]),
        "factorization": all(
            table.s_even(k) == table.eta(k) * gaussian_even_moment(2 * k)
            for k in range(1, args.max_k + 1)
        ),
    }
    if args.max_k >= 2:
        checks["E_S4_is_7/5"] = table.s_even(2) == ExactConstant(Fraction(7, 5))
    return Output(["k", "a_k", "b_k", "b_k_decimal", "E_eta^k", "E_eta^k_decimal",
                   "E_S^2k", "E_S^2k_decimal"], rows, checks=checks)


def cmd_beta(args) -> Output:
    coarse = beta_coarse(args.n)
    rows = [["coarse", args.n, _frac(coarse.lo), _frac(coarse.hi),
             f"{float(coarse.lo):.10f}", f"{float(coarse.hi):.10f}", f"{float(coarse.width):.3e}"]]
    checks = {"coarse_nonempty": coarse.lo < coarse.hi}
    extra = {"certificate": certify_beta(args.n, "coarse").to_dict()}
    notes = []
    if args.method == "refined" and args.n < 7:
        notes.append("the refined enclosure needs n >= 7; only the coarse one is shown")
    elif args.method == "refined":
        refined = beta_refined(args.n)
        rows.append(["refined", args.n, _frac(refined.lo), _frac(refined.hi),
                     f"{float(refined.lo):.10f}", f"{float(refined.hi):.10f}",
                     f"{float(refined.width):.3e}"])
        checks["refined_inside_coarse"] = refined.issubset(coarse)
        checks["refined_nonempty"] = refined.lo < refined.hi
        extra["certificate"] = BetaCertificate(args.n, refined, "refined").to_dict()
    return Output(["method", "n_cut", "lo", "hi", "lo_decimal", "hi_decimal", "width"],
                  rows, extra=extra, checks=checks, notes=notes)


def cmd_tails(args) -> Output:
    beta = _beta_value()
    rows = []
    for x in args.x:
        if x < 1:
            raise SystemExit(f"tail bounds are only stated for x >= 1, got {x}")
        rows.append([x, tail_bound_eta(x, args.k1), tail_bound_s(x, args.k2),
                     -2.5 * x * x, -0.75 * 10 ** (1 / 3) * x ** (4 / 3)])
    eta_c = kasahara_convert(2, b=(5 * math.e) ** -0.5)
    s_c = kasahara_convert(4 / 3, b=(10 * math.e**3) ** -0.25)
    extra = {
        "K1": args.k1, "K2": args.k2,
        "K1_threshold": k1_threshold(beta), "K2_threshold": k2_threshold(beta),
        "eta_constants": asdict(eta_c), "S_constants": asdict(s_c),
    }
    checks = {"bounds_positive": all(r[1] > 0 and r[2] > 0 for r in rows)}
    notes = ["K1/K2 bounds are proven only for large x; values at moderate x are not certified."]
    for name, k, thr in (("K1", args.k1, k1_threshold(beta)), ("K2", args.k2, k2_threshold(beta))):
        if k <= thr:
            notes.append(f"{name}={k} is below the computed large-x threshold {thr:.6f}")
    return Output(["x", "eta_bound", "S_bound", "log_P_eta_leading", "log_P_S_leading"],
                  rows, extra=extra, checks=checks, notes=notes)


def cmd_asymptotics(args) -> Output:
    beta = _beta_value()
    max_k = max(args.k)
    table = moment_table(max(max_k, 2))
    rows = []
    for k in args.k:
        a_ratio = math.exp(math.log(table.a_k(k)) - log_a_asymptote(k, beta))
        eta_ratio = math.exp(table.eta(k).log() - log_eta_moment_asymptote(k, beta))
        s_ratio = math.exp(table.s_even(k).log() - log_s_moment_asymptote(2 * k, beta))
        rows.append(["moment", k, a_ratio, eta_ratio, s_ratio, math.exp(log_xi_moment_asymptote(k))
                     if k < 300 else math.inf])
    checks = {"ratios_finite": all(math.isfinite(r[2]) for r in rows)}
    moments = [ExactConstant(1)] + [table.eta(k) for k in range(1, table.max_k + 1)]
    for t in args.t:
        need = int(t * t / 5 + 12 * t + 50)
        if need > table.max_k:
            table = moment_table(need)
            moments = [ExactConstant(1)] + [table.eta(k) for k in range(1, need + 1)]
        try:
            ratio = math.exp(log_mgf_series(moments, t) - log_mgf_asymptote_eta(t, beta))
        except CannotCertify:
            ratio = math.nan
            checks[f"mgf_certified_t={t}"] = False
        rows.append(["mgf_eta", t, ratio, None, None, None])
    return Output(["kind", "k_or_t", "a_ratio_or_mgf_ratio", "eta_ratio", "S_ratio", "xi_asymptote"],
                  rows, extra={"beta": beta}, checks=checks)


def cmd_simulate(args) -> Output:
    from . import excursion

    n, m, seed = args.grid_n, args.samples, args.seed
    if m < 2:
        raise SystemExit("--samples must be >= 2")
    allowance = 1.0 / math.sqrt(n)
    if args.kind == "excursion":
        ex = excursion.simulate_excursions(n, m, seed, args.workers)
        rows = []
        for name in ("xi", "eta", "s"):
            rep = ex.report(name)
            rows.append([name, rep.n_samples, rep.mean, rep.std_error] + rep.raw_moments[:4])
        eta_rep, xi_rep = ex.report("eta"), ex.report("xi")
        checks = {
            "eta_mean": abs(eta_rep.mean - SQRT_PI_8) < 3 * eta_rep.std_error + allowance,
            "xi_mean": abs(xi_rep.mean - 2 * SQRT_PI_8) < 3 * xi_rep.std_error + allowance,
        }
        if args.dump:
            with open(args.dump, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["index", "xi", "eta", "S"])
                for i, (a, b, c) in enumerate(zip(ex.xi, ex.eta, ex.s)):
                    w.writerow([i, repr(float(a)), repr(float(b)), repr(float(c))])
        return Output(["stat", "samples", "mean", "std_error", "m1", "m2", "m3", "m4"], rows,
                      checks=checks)
    if args.kind == "snake":
        s = excursion.simulate_snake(n, m, seed, args.workers)
        rep = make_report(s, n, seed, label="snake S")
        se2 = float(np.std(s**2, ddof=1) / math.sqrt(m))
        checks = {"second_moment": abs(rep.raw_moments[1] - SQRT_PI_8) < 3 * se2 + allowance}
        return Output(["stat", "samples", "mean", "std_error", "m1", "m2", "m3", "m4"],
                      [["S_snake", m, rep.mean, rep.std_error] + rep.raw_moments[:4]],
                      checks=checks)
    report = excursion.verify_idloi(n, m, seed, args.workers)
    d = report.to_dict(timestamp=not args.no_timestamp)
    rows = [[k, a, b, se, gap / se] for k, a, b, se, gap in zip(
        report.orders, report.snake_moments, report.conditional_moments,
        report.combined_se, report.gaps)]
    checks = {f"order_{k}_gap<3se": report.gap_in_se(k) < 3 for k in (2, 4)}
    checks["ks"] = report.ks_distance < report.ks_tolerance
    return Output(["order", "snake", "conditional", "combined_se", "gap_in_se"], rows,
                  extra={"ks_distance": d["ks_distance"], "ks_tolerance": d["ks_tolerance"]},
                  checks=checks)


def cmd_trees(args) -> Output:
    from .trees import wiener_samples

    n, m, seed = args.n, args.samples, args.seed
    if m < 2:
        raise SystemExit("--samples must be >= 2")
    w = wiener_samples(n, m, seed, args.workers)
    factor = 2 if args.convention == "ordered" else 1
    values = factor * w
    normalized = values / n**2.5
    rep = make_report(normalized, n, seed, label=f"wiener/{args.convention}")
    target = factor * SQRT_PI_8
    allowance = 3 * rep.std_error + 2 / math.sqrt(n)
    if args.dump:
        with open(args.dump, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["n", "index", "w", "normalized"])
            for i, (a, b) in enumerate(zip(values, normalized)):
                wr.writerow([n, i, int(a), repr(float(b))])
    rows = [[args.convention, n, m, rep.mean, rep.std_error, target, abs(rep.mean - target),
             allowance]]
    return Output(["convention", "n", "samples", "mean", "std_error", "target", "gap", "allowance"],
                  rows, checks={"mean_near_target": abs(rep.mean - target) < allowance})


# output -------------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def render(config: RunConfig, out: Output, timestamp: bool) -> str:
    header = {"tool": "iselab", "version": __version__, "config": asdict(config)}
    if timestamp:
        header["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    ok = all(out.checks.values())
    if config.format == "json":
        doc = dict(header)
        doc["columns"] = out.columns
        doc["rows"] = [[_jsonable(v) for v in row] for row in out.rows]
        doc["extra"] = out.extra
        doc["checks"] = out.checks
        doc["all_checks_passed"] = ok
        doc["notes"] = out.notes
        return json.dumps(doc, sort_keys=True, default=_jsonable) + "\n"
    buf = io.StringIO()
    prefix = "# "
    buf.write(f"{prefix}{json.dumps(header, sort_keys=True)}\n")
    for note in out.notes:
        buf.write(f"{prefix}note: {note}\n")
    for k, v in out.extra.items():
        buf.write(f"{prefix}{k}: {json.dumps(v, sort_keys=True, default=_jsonable)}\n")
    if config.format == "csv":
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(out.columns)
        for row in out.rows:
            w.writerow(["" if v is None else v for v in row])
    else:
        cells = [out.columns] + [["" if v is None else (f"{v:.10g}" if isinstance(v, float) else str(v))
                                  for v in row] for row in out.rows]
        widths = [min(max(len(r[i]) for r in cells), 48) for i in range(len(out.columns))]
        for r in cells:
            buf.write("  ".join(c.rjust(wd) if len(c) <= wd else c for c, wd in zip(r, widths)).rstrip())
            buf.write("\n")
    for name, passed in out.checks.items():
        buf.write(f"{prefix}check {name}: {'OK' if passed else 'FAIL'}\n")
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp so reruns are byte-identical")
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: $ISELAB_SEED or a fixed value)")
    common.add_argument("--workers", type=int, default=1)

    p = argparse.ArgumentParser(prog="iselab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"iselab {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("moments", parents=[common], help="exact a_k, b_k and moments")
    s.add_argument("--max-k", type=int, default=10)
    s.add_argument("--cap", type=int, default=DEFAULT_MAX_K_CAP)
    s.add_argument("--digits", type=int, default=12)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("beta", parents=[common], help="certified enclosure of beta")
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--method", choices=("coarse", "refined"), default="refined")
    s.set_defaults(func=cmd_beta)

    s = sub.add_parser("tails", parents=[common], help="tail bounds for eta and S")
    s.add_argument("--x", type=_floats, default=[1.0, 1.5, 2.0, 3.0])
    s.add_argument("--k1", type=float, default=DEFAULT_K1)
    s.add_argument("--k2", type=float, default=DEFAULT_K2)
    s.set_defaults(func=cmd_tails)

    s = sub.add_parser("asymptotics", parents=[common], help="exact vs asymptotic ratios")
    s.add_argument("--k", type=_ints, default=[5, 10, 20, 40])
    s.add_argument("--t", type=_floats, default=[10.0, 30.0])
    s.set_defaults(func=cmd_asymptotics)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo of excursions and snakes")
    s.add_argument("kind", choices=("excursion", "snake", "idloi-check"))
    s.add_argument("--grid-n", type=int, default=2000)
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--dump", help="CSV file for per-sample values (excursion only)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("trees", parents=[common], help="Wiener index of uniform labeled trees")
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--convention", choices=("ordered", "unordered"), default="ordered")
    s.add_argument("--dump", help="CSV file for per-tree values")
    s.set_defaults(func=cmd_trees)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "subcommand", "seed", "format", "workers", "out", "no_timestamp")}
    config = RunConfig(args.subcommand, params, args.seed, args.format, args.workers)
    out = args.func(args)
    text = render(config, out, timestamp=not args.no_timestamp)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(out.checks.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
