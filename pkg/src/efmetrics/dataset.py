"""Service-order dataset ingestion and validation.

The interchange format is a flat CSV, one row per request, with the
enclosing service order's id, system, hours, and team repeated on each
row.  Orders are the effort-bearing unit (effort = hours x team in
man-hours), so validation rejects a whole order as soon as any of its
rows carries an undefined function type, operation, or attribute count --
a partially ingested order would bias any effort correlation.

Required columns (header names exact, any column order):

    OS,Function,Type,Operation,Final_FTR_RET,Operation_FTR_RET,
    Original_FTR_RET,Final_DET,Operation_DET,Original_DET,FP,
    PctImpact,PM,System,Hours,Team

Operation is I (inclusion), A (alteration), or E (exclusion).  The
Operation_*/Original_*/PctImpact columns belong to alteration rows only;
an inclusion may repeat its final counts in Operation_* (they must match)
but anything else there is a schema violation.  Blank cells are allowed
only for optional columns.  Decimal separator is '.'.

Cross-checks that do not make an order unusable are reported as warnings:
a recorded FP that disagrees with the recomputed table size, recorded
%Impact or PM that disagree with their recomputed values, and alteration
counts above the final+original union bound.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .ef_metric import RequestOperation
from .fpa_core import AttributeCounts, FunctionType, OutOfDomain, fp_size
from .nesma_pm import IMPACT_PERCENTS, impact_percent, pm_of_request

CSV_COLUMNS = (
    "OS",
    "Function",
    "Type",
    "Operation",
    "Final_FTR_RET",
    "Operation_FTR_RET",
    "Original_FTR_RET",
    "Final_DET",
    "Operation_DET",
    "Original_DET",
    "FP",
    "PctImpact",
    "PM",
    "System",
    "Hours",
    "Team",
)

# Tolerance when comparing a recorded PM against its recomputed value;
# covers rounding in the source spreadsheet.
PM_ROUNDING_SLACK = 0.5


class MalformedHeader(ValueError):
    """CSV header row missing or not carrying the required column names."""


@dataclass(frozen=True)
class RequestRecord:
    """One development/maintenance request against one function."""

    os_id: str
    function_id: str
    ftype: FunctionType
    op: RequestOperation
    final_attrs: AttributeCounts
    op_attrs: AttributeCounts | None
    orig_attrs: AttributeCounts | None
    fp: int
    pct_impact: int | None
    pm: float | None
    system: str

    def __post_init__(self) -> None:
        if self.op is RequestOperation.ALTER:
            if self.op_attrs is None or self.orig_attrs is None:
                raise ValueError("alteration rows require operation and original attributes")
        else:
            if self.op_attrs is not None or self.orig_attrs is not None or self.pct_impact is not None:
                raise ValueError("operation/original attributes belong to alteration rows only")
        if self.fp <= 0:
            raise ValueError(f"FP must be positive, got {self.fp}")


@dataclass(frozen=True)
class ServiceOrder:
    """An effort-bearing work unit bundling one or more requests."""

    os_id: str
    system: str
    hours: float
    team: int
    requests: tuple[RequestRecord, ...]

    @property
    def effort_mh(self) -> float:
        """Effort in man-hours: time spent times team size."""
        return self.hours * self.team


@dataclass
class IngestReport:
    accepted_orders: int = 0
    rejected_orders: int = 0
    reject_reasons: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    @property
    def total_parsed(self) -> int:
        return self.accepted_orders + self.rejected_orders


def _opt(raw: str | None) -> str | None:
    if raw is None:
        return None
    raw = raw.strip()
    return raw or None


def _parse_int(raw: str, minimum: int, what: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"undefined {what} {raw!r}") from None
    if value < minimum:
        raise ValueError(f"{what} must be >= {minimum}, got {value}")
    return value


def _parse_row(row: dict[str, str], line_no: int) -> RequestRecord | str:
    """Parse one CSV row; returns a reason string on any defect."""
    try:
        os_id = _opt(row.get("OS"))
        system = _opt(row.get("System"))
        function_id = _opt(row.get("Function"))
        if not os_id:
            return f"line {line_no}: missing OS id"
        if not system:
            return f"line {line_no}: missing System"
        if not function_id:
            return f"line {line_no}: missing Function id"

        raw_type = _opt(row.get("Type"))
        try:
            ftype = FunctionType(raw_type) if raw_type else None
        except ValueError:
            ftype = None
        if ftype is None:
            return f"line {line_no}: undefined function type {raw_type!r}"

        raw_op = _opt(row.get("Operation"))
        try:
            op = RequestOperation(raw_op) if raw_op else None
        except ValueError:
            op = None
        if op is None:
            return f"line {line_no}: undefined operation type {raw_op!r}"

        def attrs(files_col: str, det_col: str, required: bool) -> AttributeCounts | None:
            f_raw, d_raw = _opt(row.get(files_col)), _opt(row.get(det_col))
            if f_raw is None and d_raw is None:
                if required:
                    raise ValueError(f"missing {files_col}/{det_col} for operation {op.value}")
                return None
            if f_raw is None or d_raw is None:
                raise ValueError(f"{files_col}/{det_col} must both be set or both be blank")
            return AttributeCounts(
                files=_parse_int(f_raw, 0, f"attribute count ({files_col})"),
                det=_parse_int(d_raw, 0, f"attribute count ({det_col})"),
            )

        final_attrs = attrs("Final_FTR_RET", "Final_DET", required=True)
        op_attrs = attrs("Operation_FTR_RET", "Operation_DET", required=op is RequestOperation.ALTER)
        orig_attrs = attrs("Original_FTR_RET", "Original_DET", required=op is RequestOperation.ALTER)

        raw_pct = _opt(row.get("PctImpact"))
        pct_impact = None
        if raw_pct is not None:
            pct_impact = _parse_int(raw_pct, 0, "impact percent")
            if pct_impact not in IMPACT_PERCENTS:
                return f"line {line_no}: invalid impact percent {pct_impact}"

        if op is not RequestOperation.ALTER:
            if orig_attrs is not None:
                return f"line {line_no}: original attributes given outside a change operation"
            if pct_impact is not None:
                return f"line {line_no}: impact percent given outside a change operation"
            if op_attrs is not None:
                # An inclusion impacts all of its attributes; a repeated
                # operation column must agree with the final one.
                if op is RequestOperation.EXCLUDE or op_attrs != final_attrs:
                    return f"line {line_no}: operation attributes inconsistent with operation {op.value}"
                op_attrs = None

        fp = _parse_int(_opt(row.get("FP")) or "", 1, "FP")

        raw_pm = _opt(row.get("PM"))
        pm = None
        if raw_pm is not None:
            pm = float(raw_pm)
            if pm < 0:
                return f"line {line_no}: negative PM {pm}"

        # Any whole function must be sizable by the complexity tables.
        fp_size(ftype, final_attrs)
        if op is RequestOperation.ALTER:
            fp_size(ftype, orig_attrs)

        return RequestRecord(
            os_id=os_id,
            function_id=function_id,
            ftype=ftype,
            op=op,
            final_attrs=final_attrs,
            op_attrs=op_attrs,
            orig_attrs=orig_attrs,
            fp=fp,
            pct_impact=pct_impact,
            pm=pm,
            system=system,
        )
    except OutOfDomain as exc:
        return f"line {line_no}: attribute counts outside the complexity table domain ({exc})"
    except ValueError as exc:
        return f"line {line_no}: {exc}"


def _order_warnings(order: ServiceOrder) -> Iterable[str]:
    for r in order.requests:
        computed_fp = fp_size(r.ftype, r.final_attrs)
        if r.fp != computed_fp:
            yield (
                f"function {r.function_id}: recorded FP {r.fp}"
                f" differs from computed {computed_fp}"
            )
        if r.op is RequestOperation.ALTER:
            bound = AttributeCounts(
                r.final_attrs.files + r.orig_attrs.files,
                r.final_attrs.det + r.orig_attrs.det,
            )
            if r.op_attrs.files > bound.files or r.op_attrs.det > bound.det:
                yield (
                    f"function {r.function_id}: operation attributes {r.op_attrs}"
                    f" exceed the final+original union bound {bound}"
                )
            computed_pct = impact_percent(r.orig_attrs, r.op_attrs)
            if r.pct_impact is not None and r.pct_impact != computed_pct:
                yield (
                    f"function {r.function_id}: recorded %Impact {r.pct_impact}"
                    f" differs from computed {computed_pct}"
                )
            if r.pm is not None:
                expected = pm_of_request(
                    r.op,
                    fp_size(r.ftype, r.orig_attrs),
                    pct=r.pct_impact if r.pct_impact is not None else computed_pct,
                )
                if abs(r.pm - expected) > PM_ROUNDING_SLACK:
                    yield (
                        f"function {r.function_id}: recorded PM {r.pm}"
                        f" differs from computed {expected}"
                    )
        elif r.pm is not None:
            expected = pm_of_request(r.op, r.fp)
            if abs(r.pm - expected) > PM_ROUNDING_SLACK:
                yield (
                    f"function {r.function_id}: recorded PM {r.pm}"
                    f" differs from computed {expected}"
                )


def parse_csv(path: str | Path) -> tuple[list[ServiceOrder], IngestReport]:
    """Parse and validate a service-order CSV.

    Rows are grouped into orders by OS id (first-appearance order).  An
    order is rejected whole if any of its rows fails validation or if its
    rows disagree on System/Hours/Team.  A zero-byte file yields no
    orders; a non-empty file without the required columns raises
    MalformedHeader.  IO failures propagate as OSError.
    """
    report = IngestReport()
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            return [], report
        if set(reader.fieldnames) != set(CSV_COLUMNS):
            missing = sorted(set(CSV_COLUMNS) - set(reader.fieldnames))
            extra = sorted(set(reader.fieldnames) - set(CSV_COLUMNS))
            raise MalformedHeader(f"bad CSV header: missing {missing}, unexpected {extra}")

        # os_id -> list of (record-or-reason, raw hours, raw team, system)
        groups: dict[str, list] = {}
        for line_no, row in enumerate(reader, start=2):
            parsed = _parse_row(row, line_no)
            key = _opt(row.get("OS")) or f"<blank OS @line {line_no}>"
            groups.setdefault(key, []).append(
                (parsed, _opt(row.get("Hours")), _opt(row.get("Team")), _opt(row.get("System")))
            )

    orders: list[ServiceOrder] = []
    for os_id, rows in groups.items():
        reasons = [p for p, _, _, _ in rows if isinstance(p, str)]
        if reasons:
            report.rejected_orders += 1
            report.reject_reasons.append((os_id, reasons[0]))
            continue
        records = [p for p, _, _, _ in rows]
        systems = {s for _, _, _, s in rows}
        hours_raw = {h for _, h, _, _ in rows}
        team_raw = {t for _, _, t, _ in rows}
        if len(systems) != 1 or len(hours_raw) != 1 or len(team_raw) != 1:
            report.rejected_orders += 1
            report.reject_reasons.append((os_id, "conflicting System/Hours/Team across rows"))
            continue
        try:
            hours = float(hours_raw.pop() or "")
            team = int(team_raw.pop() or "")
            if hours < 0 or team < 1:
                raise ValueError
        except ValueError:
            report.rejected_orders += 1
            report.reject_reasons.append((os_id, "undefined Hours/Team"))
            continue
        order = ServiceOrder(
            os_id=os_id,
            system=systems.pop(),
            hours=hours,
            team=team,
            requests=tuple(records),
        )
        report.accepted_orders += 1
        report.warnings.extend((os_id, w) for w in _order_warnings(order))
        orders.append(order)
    return orders, report


def orders_to_rows(orders: Iterable[ServiceOrder]) -> list[dict[str, str]]:
    """Flatten orders back to CSV-shaped rows (canonical column order)."""
    rows = []
    for o in orders:
        for r in o.requests:
            rows.append(
                {
                    "OS": o.os_id,
                    "Function": r.function_id,
                    "Type": r.ftype.value,
                    "Operation": r.op.value,
                    "Final_FTR_RET": str(r.final_attrs.files),
                    "Operation_FTR_RET": "" if r.op_attrs is None else str(r.op_attrs.files),
                    "Original_FTR_RET": "" if r.orig_attrs is None else str(r.orig_attrs.files),
                    "Final_DET": str(r.final_attrs.det),
                    "Operation_DET": "" if r.op_attrs is None else str(r.op_attrs.det),
                    "Original_DET": "" if r.orig_attrs is None else str(r.orig_attrs.det),
                    "FP": str(r.fp),
                    "PctImpact": "" if r.pct_impact is None else str(r.pct_impact),
                    "PM": "" if r.pm is None else repr(r.pm),
                    "System": o.system,
                    "Hours": repr(o.hours),
                    "Team": str(o.team),
                }
            )
    return rows


def write_csv(orders: Iterable[ServiceOrder], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(orders_to_rows(orders))


def filter_systems(orders: Iterable[ServiceOrder], min_os: int = 15) -> dict[str, list[ServiceOrder]]:
    """Group orders by system, keeping systems with at least ``min_os`` orders.

    Systems are keyed alphabetically; within a system orders are sorted
    by OS id (numeric-string aware) for deterministic downstream output.
    """
    by_system: dict[str, list[ServiceOrder]] = {}
    for o in orders:
        by_system.setdefault(o.system, []).append(o)
    out: dict[str, list[ServiceOrder]] = {}
    for system in sorted(by_system):
        kept = by_system[system]
        if len(kept) >= min_os:
            out[system] = sorted(kept, key=lambda o: (len(o.os_id), o.os_id))
    return out
