"""Governance indicators over a request/effort log, and their chart.

Seven illustrative indicators are computed per (system, period) from a
log of EF-sized requests plus period-level effort, elapsed time, failure
count, and expected benefit:

    functional size     EF held in inventory at period end
    production          EF of all requests implemented in the period
    rework production   EF of alteration/exclusion requests only
    productivity        production / effort (EF per man-hour)
    error density       failures / functional size
    delivery speed      production / elapsed time (EF per hour)
    benefit density     expected benefit / functional size

Inventory is maintained by replaying the request log in order: an
inclusion adds the function, an alteration replaces its final attributes,
an exclusion removes it.  A zero denominator marks the indicator
undefined (value None) rather than zero, so a dashboard cannot mistake
"no effort booked" for "infinite productivity".

The chart is a multi-indicator, multi-instance grid rendered to SVG:
indicators as columns, systems as rows, and per cell a colored area whose
width is the value scaled by a rule of three against the column maximum.
The previous period's value is a solid vertical line, the period target a
dashed one, and a benchmark a short tick at the cell base.  Undefined
values render as a hatched placeholder.  Rendering is pure and
byte-stable, so outputs are golden-file comparable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

from .ef_metric import (
    CoefficientSet,
    RequestOperation,
    ef_of_function,
    ef_of_request,
)
from .fpa_core import AttributeCounts, FunctionType


class EmptyInput(ValueError):
    """Chart rendering was asked for an empty matrix."""


class IndicatorKind(Enum):
    FUNCTIONAL_SIZE = "functional_size"
    PRODUCTION = "production"
    REWORK_PRODUCTION = "rework_production"
    PRODUCTIVITY = "productivity"
    ERROR_DENSITY = "error_density"
    DELIVERY_SPEED = "delivery_speed"
    BENEFIT_DENSITY = "benefit_density"

    @property
    def label(self) -> str:
        return {
            IndicatorKind.FUNCTIONAL_SIZE: "Functional size",
            IndicatorKind.PRODUCTION: "Production",
            IndicatorKind.REWORK_PRODUCTION: "Rework production",
            IndicatorKind.PRODUCTIVITY: "Productivity",
            IndicatorKind.ERROR_DENSITY: "Error density",
            IndicatorKind.DELIVERY_SPEED: "Delivery speed",
            IndicatorKind.BENEFIT_DENSITY: "Benefit density",
        }[self]

    @property
    def unit(self) -> str:
        return {
            IndicatorKind.FUNCTIONAL_SIZE: "EF",
            IndicatorKind.PRODUCTION: "EF",
            IndicatorKind.REWORK_PRODUCTION: "EF",
            IndicatorKind.PRODUCTIVITY: "EF/man-hour",
            IndicatorKind.ERROR_DENSITY: "failures/EF",
            IndicatorKind.DELIVERY_SPEED: "EF/hour",
            IndicatorKind.BENEFIT_DENSITY: "$/EF",
        }[self]


INDICATOR_ORDER = tuple(IndicatorKind)


@dataclass(frozen=True)
class PeriodRequest:
    """One EF-sized request in a period log."""

    function_id: str
    ftype: FunctionType
    op: RequestOperation
    final_attrs: AttributeCounts | None
    op_attrs: AttributeCounts | None
    ef: float  # EF booked for the request (constant-only for exclusions)


@dataclass(frozen=True)
class PeriodLog:
    """One system's activity over one reporting period."""

    system: str
    period: str
    requests: tuple[PeriodRequest, ...]
    effort_mh: float
    elapsed_hours: float
    failures: int
    expected_benefit: float
    targets: Mapping[str, float] = field(default_factory=dict)
    benchmarks: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.effort_mh < 0 or self.elapsed_hours < 0 or self.failures < 0:
            raise ValueError("effort, elapsed time, and failures must be non-negative")


@dataclass(frozen=True)
class IndicatorValue:
    kind: IndicatorKind
    value: float | None  # None marks an undefined (zero-denominator) indicator
    unit: str
    prev_value: float | None = None
    target: float | None = None
    benchmark: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "unit": self.unit,
            "prev_value": self.prev_value,
            "target": self.target,
            "benchmark": self.benchmark,
        }


Inventory = dict[str, tuple[FunctionType, AttributeCounts]]


def replay_requests(
    inventory: Inventory, requests: Iterable[PeriodRequest]
) -> tuple[Inventory, list[str]]:
    """Apply one period's requests to a function inventory.

    Returns the updated inventory (input is not mutated) and any replay
    anomalies: altering or excluding an unknown function, or including an
    already-present one.  Anomalies are tolerated (upsert/no-op) so a log
    that starts mid-history still produces indicators.
    """
    inv = dict(inventory)
    warnings: list[str] = []
    for r in requests:
        if r.op is RequestOperation.EXCLUDE:
            if r.function_id in inv:
                del inv[r.function_id]
            else:
                warnings.append(f"exclusion of unknown function {r.function_id}")
        else:
            if r.final_attrs is None:
                warnings.append(f"request on {r.function_id} lacks final attributes; skipped")
                continue
            if r.op is RequestOperation.INCLUDE and r.function_id in inv:
                warnings.append(f"inclusion of already-present function {r.function_id}")
            if r.op is RequestOperation.ALTER and r.function_id not in inv:
                warnings.append(f"alteration of unknown function {r.function_id}")
            inv[r.function_id] = (r.ftype, r.final_attrs)
    return inv, warnings


def inventory_ef(inventory: Inventory, coeffs: CoefficientSet | None = None) -> float:
    """Total EF of the functions currently in inventory."""
    return sum(ef_of_function(ft, attrs, coeffs) for ft, attrs in inventory.values())


def compute_indicators(log: PeriodLog, inventory_size_ef: float) -> list[IndicatorValue]:
    """The seven indicator values for one period, in canonical order.

    ``inventory_size_ef`` is the system's total EF at period end, as
    maintained by ``replay_requests``/``inventory_ef``.
    """
    production = sum(r.ef for r in log.requests)
    rework = sum(
        r.ef for r in log.requests if r.op in (RequestOperation.ALTER, RequestOperation.EXCLUDE)
    )

    def ratio(num: float, den: float) -> float | None:
        return num / den if den > 0 else None

    raw: dict[IndicatorKind, float | None] = {
        IndicatorKind.FUNCTIONAL_SIZE: inventory_size_ef,
        IndicatorKind.PRODUCTION: production,
        IndicatorKind.REWORK_PRODUCTION: rework,
        IndicatorKind.PRODUCTIVITY: ratio(production, log.effort_mh),
        IndicatorKind.ERROR_DENSITY: ratio(float(log.failures), inventory_size_ef),
        IndicatorKind.DELIVERY_SPEED: ratio(production, log.elapsed_hours),
        IndicatorKind.BENEFIT_DENSITY: ratio(log.expected_benefit, inventory_size_ef),
    }
    return [
        IndicatorValue(
            kind=kind,
            value=raw[kind],
            unit=kind.unit,
            target=log.targets.get(kind.value),
            benchmark=log.benchmarks.get(kind.value),
        )
        for kind in INDICATOR_ORDER
    ]


@dataclass(frozen=True)
class PeriodIndicators:
    system: str
    period: str
    values: tuple[IndicatorValue, ...]
    replay_warnings: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "system": self.system,
            "period": self.period,
            "indicators": [v.to_json_dict() for v in self.values],
            "replay_warnings": list(self.replay_warnings),
        }


def compute_dashboard(
    logs: Sequence[PeriodLog], coeffs: CoefficientSet | None = None
) -> list[PeriodIndicators]:
    """Indicators for every (system, period), replaying per-system history.

    Periods are processed in their order of appearance per system; each
    indicator carries the previous period's value so charts can show the
    trend markers.
    """
    by_system: dict[str, list[PeriodLog]] = {}
    for log in logs:
        by_system.setdefault(log.system, []).append(log)

    out: list[PeriodIndicators] = []
    for system, sys_logs in by_system.items():
        inventory: Inventory = {}
        prev: dict[IndicatorKind, float | None] = {}
        for log in sys_logs:
            inventory, warnings = replay_requests(inventory, log.requests)
            values = compute_indicators(log, inventory_ef(inventory, coeffs))
            if prev:
                values = [replace(v, prev_value=prev.get(v.kind)) for v in values]
            prev = {v.kind: v.value for v in values}
            out.append(
                PeriodIndicators(
                    system=system,
                    period=log.period,
                    values=tuple(values),
                    replay_warnings=tuple(warnings),
                )
            )
    return out


def load_period_log(path: str | Path, coeffs: CoefficientSet | None = None) -> list[PeriodLog]:
    """Read the JSON period-log format (see README for the schema)."""
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    logs = []
    for entry in doc["periods"]:
        requests = []
        for rq in entry.get("requests", ()):
            ftype = FunctionType(rq["type"])
            op = RequestOperation(rq["op"])
            final_attrs = None
            if "files" in rq or "det" in rq:
                final_attrs = AttributeCounts(int(rq.get("files", 0)), int(rq.get("det", 0)))
            op_attrs = None
            if "op_files" in rq or "op_det" in rq:
                op_attrs = AttributeCounts(int(rq.get("op_files", 0)), int(rq.get("op_det", 0)))
            ef = ef_of_request(ftype, op, final_attrs=final_attrs, op_attrs=op_attrs, coeffs=coeffs)
            requests.append(
                PeriodRequest(
                    function_id=str(rq["function"]),
                    ftype=ftype,
                    op=op,
                    final_attrs=final_attrs,
                    op_attrs=op_attrs,
                    ef=ef.ef,
                )
            )
        logs.append(
            PeriodLog(
                system=str(entry["system"]),
                period=str(entry["period"]),
                requests=tuple(requests),
                effort_mh=float(entry.get("effort_mh", 0.0)),
                elapsed_hours=float(entry.get("elapsed_hours", 0.0)),
                failures=int(entry.get("failures", 0)),
                expected_benefit=float(entry.get("expected_benefit", 0.0)),
                targets={str(k): float(v) for k, v in entry.get("targets", {}).items()},
                benchmarks={str(k): float(v) for k, v in entry.get("benchmarks", {}).items()},
            )
        )
    return logs


# --------------------------------------------------------------------------
# Chart rendering
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartLayout:
    max_col_width: float = 120.0
    row_height: float = 36.0
    label_width: float = 72.0
    header_height: float = 44.0
    col_gap: float = 14.0
    row_gap: float = 10.0
    margin: float = 12.0
    bar_pad: float = 6.0  # vertical inset of the colored area within its row
    benchmark_tick: float = 7.0
    font_size: float = 11.0
    bar_fill: str = "#c0c7cd"
    marker_color: str = "#1a1a1a"
    frame_color: str = "#d9d9d9"

    def __post_init__(self) -> None:
        if self.max_col_width <= 0 or self.row_height <= 0:
            raise ValueError("column width and row height must be positive")


@dataclass(frozen=True)
class ChartRow:
    label: str
    values: tuple[IndicatorValue, ...]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_chart(rows: Sequence[ChartRow], layout: ChartLayout | None = None) -> str:
    """Render the indicator matrix as a standalone SVG 1.1 document.

    Every cell's colored width is value/column-maximum times the column
    width; markers (previous period solid, target dashed, benchmark base
    tick) are scaled the same way and clamped to the column.  Undefined
    values get a hatched placeholder.  Output is byte-stable for
    identical input.
    """
    lay = layout or ChartLayout()
    if not rows or not rows[0].values:
        raise EmptyInput("chart needs at least one row and one indicator")
    kinds = tuple(v.kind for v in rows[0].values)
    for row in rows:
        if tuple(v.kind for v in row.values) != kinds:
            raise ValueError("all chart rows must carry the same indicators in the same order")

    ncols, nrows = len(kinds), len(rows)
    col_maxima = []
    for j in range(ncols):
        defined = [row.values[j].value for row in rows if row.values[j].value is not None]
        col_maxima.append(max(defined) if defined else 0.0)

    width = 2 * lay.margin + lay.label_width + ncols * lay.max_col_width + (ncols - 1) * lay.col_gap
    height = 2 * lay.margin + lay.header_height + nrows * lay.row_height + (nrows - 1) * lay.row_gap

    def col_x(j: int) -> float:
        return lay.margin + lay.label_width + j * (lay.max_col_width + lay.col_gap)

    def row_y(i: int) -> float:
        return lay.margin + lay.header_height + i * (lay.row_height + lay.row_gap)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        "<defs>",
        '<pattern id="undef" patternUnits="userSpaceOnUse" width="6" height="6">'
        '<path d="M0,6 L6,0" stroke="#9a9a9a" stroke-width="1"/>'
        "</pattern>",
        "</defs>",
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]

    font = f'font-family="sans-serif" font-size="{_fmt(lay.font_size)}"'
    for j, kind in enumerate(kinds):
        cx = col_x(j) + lay.max_col_width / 2
        out.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(lay.margin + lay.font_size)}" {font} '
            f'text-anchor="middle">{escape(kind.label)}</text>'
        )
        out.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(lay.margin + 2.2 * lay.font_size)}" {font} '
            f'text-anchor="middle" fill="#666666">{escape(kind.unit)}</text>'
        )

    for i, row in enumerate(rows):
        y = row_y(i)
        out.append(
            f'<text x="{_fmt(lay.margin)}" y="{_fmt(y + lay.row_height / 2 + lay.font_size / 3)}" '
            f"{font}>{escape(row.label)}</text>"
        )
        for j, value in enumerate(row.values):
            x = col_x(j)
            out.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(lay.max_col_width)}" '
                f'height="{_fmt(lay.row_height)}" fill="none" stroke="{lay.frame_color}" '
                'stroke-width="1"/>'
            )
            if value.value is None:
                out.append(
                    f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(lay.max_col_width)}" '
                    f'height="{_fmt(lay.row_height)}" fill="url(#undef)"/>'
                )
                continue
            scale = lay.max_col_width / col_maxima[j] if col_maxima[j] > 0 else 0.0

            def scaled(v: float) -> float:
                return min(max(v * scale, 0.0), lay.max_col_width)

            bar_w = scaled(value.value)
            if bar_w > 0:
                out.append(
                    f'<rect x="{_fmt(x)}" y="{_fmt(y + lay.bar_pad)}" width="{_fmt(bar_w)}" '
                    f'height="{_fmt(lay.row_height - 2 * lay.bar_pad)}" fill="{lay.bar_fill}"/>'
                )
            if value.prev_value is not None:
                px = x + scaled(value.prev_value)
                out.append(
                    f'<line x1="{_fmt(px)}" y1="{_fmt(y)}" x2="{_fmt(px)}" '
                    f'y2="{_fmt(y + lay.row_height)}" stroke="{lay.marker_color}" '
                    'stroke-width="1.5"/>'
                )
            if value.target is not None:
                tx = x + scaled(value.target)
                out.append(
                    f'<line x1="{_fmt(tx)}" y1="{_fmt(y)}" x2="{_fmt(tx)}" '
                    f'y2="{_fmt(y + lay.row_height)}" stroke="{lay.marker_color}" '
                    'stroke-width="1.5" stroke-dasharray="4,3"/>'
                )
            if value.benchmark is not None:
                bx = x + scaled(value.benchmark)
                out.append(
                    f'<line x1="{_fmt(bx)}" y1="{_fmt(y + lay.row_height - lay.benchmark_tick)}" '
                    f'x2="{_fmt(bx)}" y2="{_fmt(y + lay.row_height)}" '
                    f'stroke="{lay.marker_color}" stroke-width="2"/>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
