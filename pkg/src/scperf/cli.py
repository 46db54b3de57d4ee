"""Command-line front end.

Usage::

    scperf scperf --phi 0.95 --theta 0.4 -L 2 --sl 0.95
    scperf psi --phi 0.7 --phi 0.2 -n 5
    scperf simulate --phi 0.95 --theta 0.4 -L 1 --periods 100000 --seed 42
    scperf table 2
    scperf sweep --preset fig3 > fig3.csv
    scperf validate --phi 1.2

``-L`` is the lead time plus one review period (L = 1 means zero physical
lead time). Exit codes: 0 success, 2 usage error, 3 domain error (model
not stationary/invertible, truncation failure, degenerate input).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .arma_core import ArmaModel, psi_weights, validate_model
from .exceptions import DomainError, InvalidInputError, ScperfError
from .inventory import scperf
from .simulator import MaPolicy, SimulationConfig, estimate_bullwhip
from .tables import grid, preset_sweep, sweep_m, table

__all__ = ["main", "main_entry", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_DOMAIN"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3

# digits used by text output when --precision is not given
_TEXT_DIGITS = {"bullwhip": 6, "safety_factor": 6, "empirical_m": 6, "analytic_m": 6, "half_width": 6}
_DEFAULT_DIGITS = 3
_TABLE_DIGITS = {1: {"default": 6}, 2: {"Bullwhip": 5, "default": 3}, 3: {"SL": 2, "default": 3}}
_TEXT_LABELS = {"bullwhip": "Bullwhip", "ss": "SS", "sslt": "SSLT", "safety_factor": "z"}


class _UsageError(Exception):
    pass


def _fmt(value, digits: int, strip: bool = True) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, int)) and not isinstance(value, float):
        return str(value)
    if not math.isfinite(value):
        return str(value)
    s = f"{round(value, digits):.{digits}f}"
    if strip and "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _full(value) -> str:
    # shortest round-trip representation
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for row in rows:
        w.writerow([_full(v) for v in row.values()])
    return buf.getvalue()


def _text_table(rows: list[dict], digits: dict) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_fmt(r[c], digits.get(c, digits["default"]), strip=False) if isinstance(r[c], float) else _full(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _model_from(args) -> ArmaModel:
    return ArmaModel(mu=args.mu, phi=args.phi or (), theta=args.theta or (), sigma_eps=args.sigma)


def _load_config(args) -> None:
    """Fill unset arguments from a JSON document (e.g. an earlier --format json output)."""
    if not args.config:
        return
    with open(args.config, encoding="utf-8") as fh:
        data = json.load(fh)
    model = data.get("model", {})
    if args.phi is None:
        args.phi = model.get("phi", [])
    if args.theta is None:
        args.theta = model.get("theta", [])
    if args.mu is None:
        args.mu = model.get("mu", 0.0)
    if args.sigma is None:
        args.sigma = model.get("sigma_eps", 1.0)
    if args.lead_time is None and "lead_time" in data:
        args.lead_time = data["lead_time"]
    if args.sl is None and "service_level" in data:
        args.sl = data["service_level"]


def _defaults(args) -> None:
    args.mu = 0.0 if args.mu is None else args.mu
    args.sigma = 1.0 if args.sigma is None else args.sigma
    args.lead_time = 1 if args.lead_time is None else args.lead_time
    args.sl = 0.95 if args.sl is None else args.sl


def _emit_record(record: dict, fmt: str, precision: int | None, out) -> None:
    if fmt == "json":
        out.write(json.dumps(record) + "\n")
    elif fmt == "csv":
        flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list))}
        out.write(_csv([flat]))
    else:
        for k, v in record.items():
            if isinstance(v, (dict, list)):
                continue
            if isinstance(v, float):
                d = precision if precision is not None else _TEXT_DIGITS.get(k, _DEFAULT_DIGITS)
                v = _fmt(v, d)
            out.write(f"{_TEXT_LABELS.get(k, k)}={v}\n")


def cmd_scperf(args, out) -> int:
    model = _model_from(args)
    report = scperf(model, args.lead_time, args.sl)
    record = report.to_dict()
    record["model"] = model.to_dict()
    _emit_record(record, args.format, args.precision, out)
    return EXIT_OK


def cmd_psi(args, out) -> int:
    model = _model_from(args)
    n = args.n
    if n < 0:
        raise _UsageError("-n must be nonnegative")
    psi = psi_weights(model, min_n=n)
    rows, cum_sq, partial = [], 0.0, 0.0
    for j in range(n + 1):
        w = float(psi.weights[j])
        cum_sq += w * w
        partial += w
        rows.append({"j": j, "psi": w, "cum_sum_sq": cum_sq, "partial_sum": partial})
    if args.format == "json":
        out.write(json.dumps({"model": model.to_dict(), "rows": rows, "tail_bound": psi.tail_bound}) + "\n")
    elif args.format == "csv":
        out.write(_csv(rows))
    else:
        d = args.precision if args.precision is not None else 10
        out.write(_text_table(rows, {"default": d}))
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    model = _model_from(args)
    config = SimulationConfig(
        model=model,
        lead_time=args.lead_time,
        service_level=args.sl,
        periods=args.periods,
        burn_in=args.burn_in,
        replications=args.replications,
        seed=args.seed,
        ma_policy=MaPolicy(args.ma_policy),
    )
    res = estimate_bullwhip(config, workers=args.workers, trace_dir=args.trace_dir)
    record = res.to_dict()
    record["verdict"] = "PASS" if res.agrees(args.k) else "FAIL"
    _emit_record(record, args.format, args.precision, out)
    return EXIT_OK


def cmd_table(args, out) -> int:
    if args.table_id not in (1, 2, 3):
        raise _UsageError(f"unknown table id {args.table_id}; choose 1, 2 or 3")
    rows = table(args.table_id)
    if args.format == "json":
        out.write(json.dumps(rows) + "\n")
    elif args.format == "csv":
        out.write(_csv(rows))
    else:
        digits = _TABLE_DIGITS[args.table_id]
        if args.precision is not None:
            digits = {"default": args.precision}
        out.write(_text_table(rows, digits))
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    if args.preset:
        rows = preset_sweep(args.preset)
    else:
        if args.param is None or args.start is None or args.stop is None or args.step is None:
            raise _UsageError("sweep needs --preset or all of --param, --from, --to, --step")
        try:
            values = grid(args.start, args.stop, args.step)
        except InvalidInputError as exc:
            raise _UsageError(str(exc)) from None
        phi = list(args.phi or [0.0])
        theta = list(args.theta or [])
        rows = []
        for v in values:
            if args.param == "phi":
                phi[0] = float(v)
            else:
                theta = [float(v)] + theta[1:]
            rows.append({f"{args.param}1": float(v), "L": args.lead_time, "M": sweep_m(phi, theta, args.lead_time)})
    if not rows:
        raise _UsageError("empty sweep grid")
    if args.format == "json":
        out.write(json.dumps(rows) + "\n")
    else:
        out.write(_csv(rows))
    return EXIT_OK


def cmd_validate(args, out) -> int:
    model = _model_from(args)
    v = validate_model(model)
    record = {
        "stationary": v.stationary,
        "invertible": v.invertible,
        "redundant": v.redundant,
        "ar_root_moduli": [float(x) for x in v.ar_root_moduli],
        "ma_root_moduli": [float(x) for x in v.ma_root_moduli],
    }
    if args.format == "json":
        out.write(json.dumps(record) + "\n")
    else:
        for k, val in record.items():
            if isinstance(val, list):
                val = " ".join(_fmt(x, 6) for x in val)
            out.write(f"{k}={val}\n")
    if not v.ok:
        print(f"scperf: {'; '.join(v.problems())}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


_COMMANDS = {
    "scperf": cmd_scperf,
    "psi": cmd_psi,
    "simulate": cmd_simulate,
    "table": cmd_table,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--mu", type=float, default=None, help="constant term (default 0)")
    g.add_argument("--phi", type=float, action="append", help="AR coefficient, repeat for AR(p)")
    g.add_argument("--theta", type=float, action="append", help="MA coefficient, repeat for MA(q)")
    g.add_argument("--sigma", type=float, default=None, help="innovation std dev (default 1)")
    g.add_argument("-L", "--lead-time", type=int, default=None, help="lead time plus one review period (default 1)")
    g.add_argument("--sl", "--service-level", dest="sl", type=float, default=None, help="service level in (0,1) (default 0.95)")
    g.add_argument("--config", help="JSON file with model/lead_time/service_level (e.g. prior JSON output)")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("json", "csv", "text"), default="text")
    o.add_argument("--precision", type=int, default=None, help="decimal digits in text output")

    parser = argparse.ArgumentParser(
        prog="scperf",
        description="Bullwhip measure, safety stocks and Monte-Carlo checks for ARMA demand.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scperf", parents=[common], help="bullwhip, demand moments and safety stocks")
    p = sub.add_parser("psi", parents=[common], help="MA(inf) psi-weights")
    p.add_argument("-n", type=int, default=10, help="last index to print")
    s = sub.add_parser("simulate", parents=[common], help="Monte-Carlo estimate of M")
    s.add_argument("--periods", type=int, default=100_000)
    s.add_argument("--burn-in", type=int, default=None)
    s.add_argument("--replications", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--k", type=float, default=1.0, help="PASS if |empirical - analytic| <= k * half_width")
    s.add_argument("--ma-policy", choices=[m.value for m in MaPolicy], default=MaPolicy.CONSTANT_OUT.value)
    s.add_argument("--trace-dir", default=None, help="write one CSV trace per replication here")
    t = sub.add_parser("table", parents=[common], help="regenerate table 1, 2 or 3")
    t.add_argument("table_id", type=int)
    w = sub.add_parser("sweep", parents=[common], help="CSV grid of M for plotting")
    w.add_argument("--preset", choices=("fig1", "fig2", "fig3"))
    w.add_argument("--param", choices=("phi", "theta"))
    w.add_argument("--from", dest="start", type=float)
    w.add_argument("--to", dest="stop", type=float)
    w.add_argument("--step", type=float)
    sub.add_parser("validate", parents=[common], help="stationarity / invertibility / redundancy check")
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config(args)
        _defaults(args)
        return _COMMANDS[args.command](args, out)
    except (_UsageError, InvalidInputError) as exc:
        print(f"scperf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ScperfError) as exc:
        print(f"scperf: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"scperf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
