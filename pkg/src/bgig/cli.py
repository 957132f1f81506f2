"""Batch command-line front end.

    bgig calibrate --input prices.csv --output params.json [--delta 1] [--trim-q 0.01] [--rate 0]
    bgig price     --input params.json --output prices.csv --strikes 0.5 1 1.5 --maturity 252
    bgig simulate  --input params.json --output paths.csv --horizon 20 --paths 100 --seed 0
    bgig density   --input params.json --output pdf.csv --grid -1 1 201 --t 1

Exit codes: 0 success, 2 usage, 3 parse or I/O, 4 numerical convergence,
5 infeasible input for the pipeline.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import date

import numpy as np

from .calibration import DEFAULT_CEILING, calibrate
from .distributions import BgigParams, bgig_pdf
from .errors import (
    BesselOverflowError,
    BracketError,
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    NoRootError,
    OptimizationError,
    PreconditionError,
    SamplingError,
    TabulationError,
)
from .pricing import McConfig, OptionKind, OptionSpec, price_table
from .process import simulate_integer_paths
from .quadrature import QuadConfig
from .risk_neutral import martingale_gap

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONVERGENCE = 4
EXIT_INFEASIBLE = 5

_PARAM_KEYS = ("a_plus", "b_plus", "p_plus", "a_minus", "b_minus", "p_minus")


class ParseError(Exception):
    """Malformed or unreadable input file."""


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------------- input


def read_price_csv(path: str) -> list[float]:
    """Closes from a ``date,close`` CSV with strictly increasing ISO dates."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError("empty CSV")
    header = [h.strip().lower() for h in rows[0]]
    if "date" not in header or "close" not in header:
        raise ParseError("CSV header must contain 'date' and 'close'")
    i_date, i_close = header.index("date"), header.index("close")
    closes, last = [], None
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            d = date.fromisoformat(row[i_date].strip())
            c = float(row[i_close])
        except (IndexError, ValueError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        if not (math.isfinite(c) and c > 0.0):
            raise ParseError(f"line {lineno}: close must be positive, got {row[i_close]!r}")
        if last is not None and d <= last:
            raise ParseError(f"line {lineno}: dates must be strictly increasing")
        last = d
        closes.append(c)
    return closes


def read_params_json(path: str, risk_neutral: bool = False) -> BgigParams:
    """Parameters from a JSON object with a_plus .. p_minus.

    With ``risk_neutral`` the rn_a_plus / rn_a_minus fields, when present,
    replace a+-; the Esscher transform leaves b and p unchanged.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("parameter JSON must be an object")
    try:
        vals = {k: float(doc[k]) for k in _PARAM_KEYS}
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric parameter: {exc}") from exc
    if risk_neutral and "rn_a_plus" in doc and "rn_a_minus" in doc:
        vals["a_plus"] = float(doc["rn_a_plus"])
        vals["a_minus"] = float(doc["rn_a_minus"])
    try:
        return BgigParams.of(*(vals[k] for k in _PARAM_KEYS))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


# ------------------------------------------------------------------ commands


def cmd_calibrate(input_csv, delta, trim_q, rate, output_json, allow_nonunit_delta=False) -> int:
    prices = read_price_csv(input_csv)
    fit, ess = calibrate(
        prices,
        delta=delta,
        trim_q=trim_q,
        r=rate,
        allow_nonunit_delta=allow_nonunit_delta,
        ceiling=DEFAULT_CEILING,
    )
    doc = dict(zip(_PARAM_KEYS, fit.params.as_tuple()))
    doc.update(
        theta_star=ess.theta_star,
        rn_a_plus=ess.rn_params.plus.a,
        rn_a_minus=ess.rn_params.minus.a,
        residual_norm=fit.residual_norm,
        n_used=fit.n_used,
        trimmed=fit.trimmed,
    )
    _write_text(output_json, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_price(params_json, strikes, maturity, rate, spot, method, n_paths, seed, output_csv) -> int:
    rn = read_params_json(params_json, risk_neutral=True)
    gap = martingale_gap(rn, rate)
    if abs(gap) > 1e-8:
        print(f"warning: parameters are not risk neutral at rate {rate} (gap {gap:.3e})", file=sys.stderr)
        if method != "lewis":
            raise PreconditionError("Monte Carlo pricing needs risk-neutral parameters")
    opts = [
        OptionSpec(spot, k, maturity, rate, kind)
        for k in strikes
        for kind in (OptionKind.CALL, OptionKind.PUT)
    ]
    mc_cfg = McConfig(n_paths=n_paths, seed=seed) if method in ("mc", "both") else None
    quad = QuadConfig(rel_tol=1e-12, initial_panels=4) if method in ("lewis", "both") else None
    table = price_table(rn, opts, mc_cfg, quad)
    def cells(pair):
        lew = "" if pair.lewis is None else _fmt(pair.lewis.value)
        mc = "" if pair.mc is None else _fmt(pair.mc.value)
        se = "" if pair.mc is None else _fmt(pair.mc.std_error)
        return [lew, mc, se]

    rows = [[_fmt(k)] + cells(table[2 * i]) + cells(table[2 * i + 1]) for i, k in enumerate(strikes)]
    header = ["strike", "call_lewis", "call_mc", "call_mc_se", "put_lewis", "put_mc", "put_mc_se"]
    _write_text(output_csv, _csv_text(header, rows))
    return EXIT_OK


def cmd_simulate(params_json, horizon, n_paths, seed, output_csv) -> int:
    P = read_params_json(params_json)
    rows = []
    if n_paths > 0:
        paths = simulate_integer_paths(P, horizon, n_paths, seed)
        for i, path in enumerate(paths):
            for t, v in enumerate(path):
                rows.append([str(i), str(t), _fmt(v)])
    _write_text(output_csv, _csv_text(["path_id", "time", "value"], rows))
    return EXIT_OK


def cmd_density(params_json, x_min, x_max, n_points, t, output_csv) -> int:
    P = read_params_json(params_json)
    xs = np.linspace(x_min, x_max, n_points) if n_points > 1 else np.array([x_min])
    pdf = np.atleast_1d(bgig_pdf(P, xs, t))
    rows = [[_fmt(x), _fmt(f)] for x, f in zip(xs, pdf)]
    _write_text(output_csv, _csv_text(["x", "pdf"], rows))
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _positive(kind):
    def conv(s):
        v = kind(s)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s}")
        return v

    return conv


def _nonnegative_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bgig", description="BGIG distributions, calibration and pricing")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("calibrate", help="fit parameters to a date,close CSV")
    c.add_argument("--input", required=True)
    c.add_argument("--output", required=True)
    c.add_argument("--delta", type=_positive(float), default=1.0)
    c.add_argument("--trim-q", type=float, default=0.01)
    c.add_argument("--rate", type=float, default=0.0)
    c.add_argument("--allow-nonunit-delta", action="store_true")

    p = sub.add_parser("price", help="European call and put prices")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--strikes", type=_positive(float), nargs="+", required=True)
    p.add_argument("--maturity", type=_positive(float), required=True)
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--spot", type=_positive(float), default=1.0)
    p.add_argument("--method", choices=("mc", "lewis", "both"), default="both")
    p.add_argument("--paths", type=_positive(int), default=50_000)
    p.add_argument("--seed", type=_nonnegative_int, default=0)

    s = sub.add_parser("simulate", help="paths on the integer grid 0..horizon")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--horizon", type=_positive(int), required=True)
    s.add_argument("--paths", type=_nonnegative_int, default=20)
    s.add_argument("--seed", type=_nonnegative_int, default=0)

    d = sub.add_parser("density", help="transition density on a uniform grid")
    d.add_argument("--input", required=True)
    d.add_argument("--output", required=True)
    d.add_argument("--grid", nargs=3, metavar=("XMIN", "XMAX", "N"), required=True)
    d.add_argument("--t", type=_positive(float), default=1.0)
    return ap


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ParseError, OSError)):
        return EXIT_PARSE
    if isinstance(
        exc, (ConvergenceError, NoRootError, BracketError, TabulationError, SamplingError, BesselOverflowError)
    ):
        return EXIT_CONVERGENCE
    if isinstance(exc, (OptimizationError, DegenerateSampleError, DomainError, PreconditionError)):
        return EXIT_INFEASIBLE
    raise exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "calibrate":
            if not 0.0 <= args.trim_q < 0.5:
                parser.error("--trim-q must lie in [0, 0.5)")
            return cmd_calibrate(
                args.input, args.delta, args.trim_q, args.rate, args.output, args.allow_nonunit_delta
            )
        if args.command == "price":
            return cmd_price(
                args.input,
                args.strikes,
                args.maturity,
                args.rate,
                args.spot,
                args.method,
                args.paths,
                args.seed,
                args.output,
            )
        if args.command == "simulate":
            return cmd_simulate(args.input, args.horizon, args.paths, args.seed, args.output)
        try:
            x_min, x_max, n = float(args.grid[0]), float(args.grid[1]), int(args.grid[2])
        except ValueError:
            parser.error("--grid expects XMIN XMAX N")
        if not (math.isfinite(x_min) and math.isfinite(x_max) and x_min < x_max) or n < 1:
            parser.error("--grid needs finite XMIN < XMAX and N >= 1")
        return cmd_density(args.input, x_min, x_max, n, args.t, args.output)
    except Exception as exc:  # noqa: BLE001
        code = _exit_code(exc)
        print(f"bgig {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
