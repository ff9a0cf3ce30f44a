"""Command-line interface.

Subcommands:

    measure     size every request of a service-order CSV (FP, EF, EFt,
                EFd, PM) with per-OS and per-system rollups
    derive      regenerate the EF coefficients from the FP tables and
                compare against the published values
    evaluate    per-system effort-vs-size regressions for each metric
    indicators  governance indicators from a JSON period log
    chart       render the indicator matrix of one period as SVG

Exit codes: 0 success; 1 IO/parse failure; 2 validation rejections under
--strict; 3 derivation does not reproduce the published coefficients;
64 usage error.  All commands are deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .dataset import MalformedHeader, parse_csv
from .derivation import BoundingRule, derivation_output_json_dict, derive_all
from .ef_metric import CoefficientSet, load_coefficients
from .evaluation import FpSource, build_study, size_request
from .governance import (
    ChartLayout,
    ChartRow,
    EmptyInput,
    compute_dashboard,
    load_period_log,
    render_chart,
)

EX_OK = 0
EX_IO = 1
EX_VALIDATION = 2
EX_REPRODUCTION = 3
EX_USAGE = 64

COEFFS_ENV_VAR = "EFMETRICS_COEFFS"


class _Parser(argparse.ArgumentParser):
    """argparse with the documented usage exit code."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _resolve_coefficients(args: argparse.Namespace) -> CoefficientSet | None:
    """--coefficients beats the environment; None means built-in defaults."""
    path = getattr(args, "coefficients", None) or os.environ.get(COEFFS_ENV_VAR)
    if path is None:
        return None
    return load_coefficients(path)


def _write_text(text: str, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
        if not text.endswith("\n"):
            f.write("\n")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --------------------------------------------------------------------------
# measure
# --------------------------------------------------------------------------


def _measure_report(orders, report, coeffs, fp_source: FpSource) -> dict:
    requests = []
    order_rows = []
    system_rows: dict[str, dict] = {}
    for o in orders:
        totals = {"fp": 0.0, "ef": 0.0, "eft": 0.0, "efd": 0.0, "pm": 0.0}
        for r in o.requests:
            sized = size_request(r, coeffs, fp_source)
            entry = {
                "os": o.os_id,
                "system": o.system,
                "function": r.function_id,
                "type": r.ftype.value,
                "op": r.op.value,
                "fp": sized.fp,
                "ef": sized.ef.ef,
                "eft": sized.ef.eft,
                "efd": sized.ef.efd,
                "pm": sized.pm,
            }
            requests.append(entry)
            totals["fp"] += sized.fp
            totals["ef"] += sized.ef.ef
            totals["eft"] += sized.ef.eft
            totals["efd"] += sized.ef.efd
            totals["pm"] += sized.pm
        order_rows.append(
            {
                "os": o.os_id,
                "system": o.system,
                "hours": o.hours,
                "team": o.team,
                "effort_mh": o.effort_mh,
                "n_requests": len(o.requests),
                **totals,
            }
        )
        sys_row = system_rows.setdefault(
            o.system,
            {"system": o.system, "n_orders": 0, "fp": 0.0, "ef": 0.0, "eft": 0.0, "efd": 0.0, "pm": 0.0},
        )
        sys_row["n_orders"] += 1
        for key in ("fp", "ef", "eft", "efd", "pm"):
            sys_row[key] += totals[key]
    return {
        "fp_source": fp_source.value,
        "requests": requests,
        "orders": order_rows,
        "systems": [system_rows[s] for s in sorted(system_rows)],
        "ingest": {
            "accepted_orders": report.accepted_orders,
            "rejected_orders": report.rejected_orders,
            "reject_reasons": [[os_id, reason] for os_id, reason in report.reject_reasons],
            "warnings": [[os_id, msg] for os_id, msg in report.warnings],
        },
    }


def _measure_text(doc: dict) -> str:
    lines = [
        f"{'OS':>10s} {'system':>10s} {'req':>4s} {'FP':>8s} {'EF':>9s} "
        f"{'EFt':>9s} {'EFd':>9s} {'PM':>9s} {'effort':>9s}"
    ]
    for o in doc["orders"]:
        lines.append(
            f"{o['os']:>10s} {o['system']:>10s} {o['n_requests']:>4d} {o['fp']:>8.2f} "
            f"{o['ef']:>9.2f} {o['eft']:>9.2f} {o['efd']:>9.2f} {o['pm']:>9.2f} "
            f"{o['effort_mh']:>9.2f}"
        )
    lines.append("")
    for s in doc["systems"]:
        lines.append(
            f"system {s['system']}: {s['n_orders']} orders, FP {s['fp']:.2f}, "
            f"EF {s['ef']:.2f}, EFt {s['eft']:.2f}, EFd {s['efd']:.2f}, PM {s['pm']:.2f}"
        )
    ing = doc["ingest"]
    lines.append("")
    lines.append(
        f"orders: {ing['accepted_orders']} accepted, {ing['rejected_orders']} rejected, "
        f"{len(ing['warnings'])} warnings"
    )
    lines.extend(f"  rejected {os_id}: {reason}" for os_id, reason in ing["reject_reasons"])
    lines.extend(f"  warning {os_id}: {msg}" for os_id, msg in ing["warnings"])
    return "\n".join(lines) + "\n"


def cmd_measure(args: argparse.Namespace) -> int:
    try:
        coeffs = _resolve_coefficients(args)
        orders, report = parse_csv(args.csv)
    except (OSError, MalformedHeader, ValueError) as exc:
        print(f"measure: {exc}", file=sys.stderr)
        return EX_IO
    doc = _measure_report(orders, report, coeffs, FpSource(args.fp_source))
    text = _json_text(doc) if args.format == "json" else _measure_text(doc)
    if args.out:
        _write_text(text, args.out)
    else:
        sys.stdout.write(text)
    if args.strict and report.rejected_orders > 0:
        print(f"measure: {report.rejected_orders} order(s) rejected (strict)", file=sys.stderr)
        return EX_VALIDATION
    return EX_OK


# --------------------------------------------------------------------------
# derive
# --------------------------------------------------------------------------


def cmd_derive(args: argparse.Namespace) -> int:
    coeffs, report = derive_all(BoundingRule(args.bounding))
    out_doc = derivation_output_json_dict(coeffs, report)
    if args.out:
        _write_text(_json_text(out_doc), args.out)
    if args.report:
        _write_text(_json_text(report.to_json_dict()), args.report)
    if args.format == "json":
        sys.stdout.write(_json_text({"output": out_doc, "report": report.to_json_dict()}))
    else:
        sys.stdout.write(report.text_table() + "\n")
        if not args.out:
            sys.stdout.write("(no --out given; coefficient config not written)\n")
    if not report.ok:
        print("derive: published values NOT reproduced; see flags", file=sys.stderr)
        return EX_REPRODUCTION
    return EX_OK


# --------------------------------------------------------------------------
# evaluate
# --------------------------------------------------------------------------


def cmd_evaluate(args: argparse.Namespace) -> int:
    try:
        coeffs = _resolve_coefficients(args)
        orders, report = parse_csv(args.csv)
    except (OSError, MalformedHeader, ValueError) as exc:
        print(f"evaluate: {exc}", file=sys.stderr)
        return EX_IO
    study = build_study(
        orders,
        coeffs,
        alpha=args.alpha,
        min_os=args.min_os,
        fp_source=FpSource(args.fp_source),
    )
    doc = study.to_json_dict()
    doc["ingest"] = {
        "accepted_orders": report.accepted_orders,
        "rejected_orders": report.rejected_orders,
    }
    if not study.systems:
        print(
            f"evaluate: warning: no system has at least {args.min_os} orders; study is empty",
            file=sys.stderr,
        )
    if args.out:
        base = Path(args.out)
        _write_text(_json_text(doc), base.with_suffix(".json"))
        _write_text(study.text_table() + "\n", base.with_suffix(".txt"))
    sys.stdout.write(_json_text(doc) if args.format == "json" else study.text_table() + "\n")
    return EX_OK


# --------------------------------------------------------------------------
# indicators / chart
# --------------------------------------------------------------------------


def cmd_indicators(args: argparse.Namespace) -> int:
    try:
        coeffs = _resolve_coefficients(args)
        logs = load_period_log(args.log, coeffs)
    except (OSError, ValueError, KeyError) as exc:
        print(f"indicators: {exc}", file=sys.stderr)
        return EX_IO
    dashboard = compute_dashboard(logs, coeffs)
    doc = {"periods": [p.to_json_dict() for p in dashboard]}
    if args.format == "json":
        text = _json_text(doc)
    else:
        lines = []
        for p in dashboard:
            lines.append(f"{p.system} / {p.period}")
            for v in p.values:
                shown = "undefined" if v.value is None else f"{v.value:.4f}"
                extra = ""
                if v.prev_value is not None:
                    extra += f"  prev {v.prev_value:.4f}"
                if v.target is not None:
                    extra += f"  target {v.target:.4f}"
                if v.benchmark is not None:
                    extra += f"  benchmark {v.benchmark:.4f}"
                lines.append(f"  {v.kind.label:<18s} {shown:>12s} {v.unit}{extra}")
        text = "\n".join(lines) + "\n"
    if args.out:
        base = Path(args.out)
        _write_text(_json_text(doc), base.with_suffix(".json"))
        _write_text(text if args.format != "json" else _json_text(doc), base.with_suffix(".txt"))
    sys.stdout.write(text)
    return EX_OK


def cmd_chart(args: argparse.Namespace) -> int:
    try:
        coeffs = _resolve_coefficients(args)
        logs = load_period_log(args.log, coeffs)
    except (OSError, ValueError, KeyError) as exc:
        print(f"chart: {exc}", file=sys.stderr)
        return EX_IO
    dashboard = compute_dashboard(logs, coeffs)
    periods = [p.period for p in dashboard]
    if not periods:
        print("chart: period log holds no periods", file=sys.stderr)
        return EX_IO
    period = args.period or periods[-1]
    rows = [ChartRow(label=p.system, values=p.values) for p in dashboard if p.period == period]
    if not rows:
        print(f"chart: no entries for period {period!r}", file=sys.stderr)
        return EX_IO
    layout = ChartLayout(max_col_width=args.max_col_width, row_height=args.row_height)
    try:
        svg = render_chart(rows, layout)
    except EmptyInput as exc:
        print(f"chart: {exc}", file=sys.stderr)
        return EX_IO
    _write_text(svg, args.out)
    print(f"chart: wrote {args.out} (period {period}, {len(rows)} systems)")
    return EX_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, coefficients: bool = True) -> None:
    if coefficients:
        sub.add_argument(
            "--coefficients",
            metavar="PATH",
            help=f"EF coefficient JSON (default: ${COEFFS_ENV_VAR} or built-in published values)",
        )
    sub.add_argument("--format", choices=["text", "json"], default="text", help="stdout format")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="efmetrics", description="Functional size measurement toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("measure", help="size every request of a service-order CSV")
    s.add_argument("csv", help="service-order CSV path")
    _add_common(s)
    s.add_argument("--fp-source", choices=["column", "recompute"], default="column")
    s.add_argument("--strict", action="store_true", help="exit 2 when any order is rejected")
    s.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("derive", help="regenerate EF coefficients from the FP tables")
    s.add_argument("--bounding", choices=[r.value for r in BoundingRule], default="widest")
    s.add_argument("--out", metavar="PATH", help="write the coefficient JSON config here")
    s.add_argument("--report", metavar="PATH", help="write the comparison report JSON here")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("evaluate", help="per-system effort-vs-size regression study")
    s.add_argument("csv", help="service-order CSV path")
    _add_common(s)
    s.add_argument("--fp-source", choices=["column", "recompute"], default="column")
    s.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    s.add_argument("--min-os", type=int, default=15, help="minimum orders per system (default 15)")
    s.add_argument("--out", metavar="BASE", help="write BASE.json and BASE.txt")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("indicators", help="governance indicators from a JSON period log")
    s.add_argument("log", help="period-log JSON path")
    _add_common(s)
    s.add_argument("--out", metavar="BASE", help="write BASE.json and BASE.txt")
    s.set_defaults(func=cmd_indicators)

    s = sub.add_parser("chart", help="render one period's indicators as SVG")
    s.add_argument("log", help="period-log JSON path")
    s.add_argument("--coefficients", metavar="PATH")
    s.add_argument("--period", help="period label (default: last in the log)")
    s.add_argument("--max-col-width", type=float, default=120.0)
    s.add_argument("--row-height", type=float, default=36.0)
    s.add_argument("--out", default="chart.svg", metavar="PATH")
    s.set_defaults(func=cmd_chart)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not (0.0 < getattr(args, "alpha", 0.05) < 1.0):
        print("alpha must lie strictly between 0 and 1", file=sys.stderr)
        return EX_USAGE
    if getattr(args, "min_os", 1) < 1:
        print("min-os must be at least 1", file=sys.stderr)
        return EX_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
