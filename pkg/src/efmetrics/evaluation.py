"""Effort-correlation study: per-system regressions of effort on size.

For every retained system (those with enough service orders) and every
size metric, order effort in man-hours is regressed on order size with
the intercept forced through the origin, and the metrics are compared by
uncentered R-squared and F-test significance.

Request sizing per metric:

    FP   inclusion/alteration book the function's full FP at conclusion
         (FPA cannot size partial change); exclusions book 0 (FPA cannot
         size deletion work at all).
    EF   inclusion books the final-attribute formula value, alteration
         the impacted-attribute value, exclusion the type constant.
    EFt  the transaction component of EF only; data files contribute 0.
    PM   NESMA maintenance points: inclusion 100% of FP, alteration
         original FP times the impact factor, exclusion 25% of FP.

This asymmetry between FP and the other metrics on partial/deletion work
is the point of the comparison, not an artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

from .dataset import RequestRecord, ServiceOrder, filter_systems
from .ef_metric import CoefficientSet, EfBreakdown, RequestOperation, ef_of_request
from .fpa_core import fp_size
from .nesma_pm import impact_percent, pm_of_request
from .regression_stats import ols_zero_intercept

DEFAULT_ALPHA = 0.05
DEFAULT_MIN_OS = 15
MIN_ORDERS_FOR_FIT = 3


class TooFewOrders(ValueError):
    """A correlation was requested over fewer orders than fit-worthy."""


class MetricKind(Enum):
    FP = "FP"
    EF = "EF"
    EFT = "EFt"
    PM = "PM"


METRIC_ORDER = (MetricKind.FP, MetricKind.EF, MetricKind.EFT, MetricKind.PM)


class FpSource(Enum):
    """Whether order FP sums trust the recorded FP column or recompute it."""

    COLUMN = "column"
    RECOMPUTE = "recompute"


class Verdict(Enum):
    SUPERIOR = "superior"
    INFERIOR = "inferior"
    TIE_INSIGNIFICANT = "tie-insignificant"


@dataclass(frozen=True)
class SizedRequest:
    """One request sized under all metrics at once."""

    record: RequestRecord
    fp: float
    ef: EfBreakdown
    pm: float


def size_request(
    r: RequestRecord,
    coeffs: CoefficientSet | None = None,
    fp_source: FpSource = FpSource.COLUMN,
) -> SizedRequest:
    whole_fp = r.fp if fp_source is FpSource.COLUMN else fp_size(r.ftype, r.final_attrs)
    if r.op is RequestOperation.EXCLUDE:
        fp_metric = 0.0
    else:
        fp_metric = float(whole_fp)
    ef = ef_of_request(r.ftype, r.op, final_attrs=r.final_attrs, op_attrs=r.op_attrs, coeffs=coeffs)
    if r.op is RequestOperation.ALTER:
        # PM scales the function's *original* size; there is no original-FP
        # column, so it is always recomputed from the original attributes.
        orig_fp = fp_size(r.ftype, r.orig_attrs)
        pct = r.pct_impact if r.pct_impact is not None else impact_percent(r.orig_attrs, r.op_attrs)
        pm = pm_of_request(r.op, orig_fp, pct=pct)
    else:
        pm = pm_of_request(r.op, whole_fp)
    return SizedRequest(record=r, fp=fp_metric, ef=ef, pm=pm)


def os_size(
    order: ServiceOrder,
    metric: MetricKind,
    coeffs: CoefficientSet | None = None,
    fp_source: FpSource = FpSource.COLUMN,
) -> float:
    """The order's size under one metric: the sum over its requests."""
    total = 0.0
    for r in order.requests:
        sized = size_request(r, coeffs, fp_source)
        if metric is MetricKind.FP:
            total += sized.fp
        elif metric is MetricKind.EF:
            total += sized.ef.ef
        elif metric is MetricKind.EFT:
            total += sized.ef.eft
        else:
            total += sized.pm
    return total


@dataclass(frozen=True)
class StudyRow:
    system: str
    metric: MetricKind
    n_os: int
    n_requests: int
    r2: float
    p_f: float
    log10_p_f: float
    slope: float  # man-hours per size unit
    prop_to_fp: float | None  # r2/r2_FP - 1; None on the FP baseline row

    def to_json_dict(self) -> dict:
        return {
            "system": self.system,
            "metric": self.metric.value,
            "n_os": self.n_os,
            "n_requests": self.n_requests,
            "r2": self.r2,
            "p_f": self.p_f,
            "log10_p_f": self.log10_p_f,
            "slope": self.slope,
            "prop_to_fp": self.prop_to_fp,
        }


def correlate(
    system: str,
    orders: Sequence[ServiceOrder],
    metric: MetricKind,
    coeffs: CoefficientSet | None = None,
    fp_source: FpSource = FpSource.COLUMN,
) -> StudyRow:
    """Zero-intercept regression of order effort on order size."""
    if len(orders) < MIN_ORDERS_FOR_FIT:
        raise TooFewOrders(f"system {system}: {len(orders)} orders < {MIN_ORDERS_FOR_FIT}")
    x = [os_size(o, metric, coeffs, fp_source) for o in orders]
    y = [o.effort_mh for o in orders]
    res = ols_zero_intercept(x, y)
    return StudyRow(
        system=system,
        metric=metric,
        n_os=len(orders),
        n_requests=sum(len(o.requests) for o in orders),
        r2=res.r2_uncentered,
        p_f=res.p_f,
        log10_p_f=res.log10_p_f,
        slope=res.coeffs[0],
        prop_to_fp=None,
    )


@dataclass(frozen=True)
class Comparison:
    system: str
    first: MetricKind
    second: MetricKind
    verdict: Verdict
    reason: str

    def to_json_dict(self) -> dict:
        return {
            "system": self.system,
            "first": self.first.value,
            "second": self.second.value,
            "verdict": self.verdict.value,
            "reason": self.reason,
        }


def compare(rows: Sequence[StudyRow], alpha: float = DEFAULT_ALPHA) -> list[Comparison]:
    """Pairwise superiority verdicts among one system's metric rows.

    A correlation is superior when it is significant and the other is
    not, or both are significant and it has the larger R-squared.  Two
    insignificant correlations, or two significant ones with equal
    R-squared, yield no winner.
    """
    systems = {r.system for r in rows}
    if len(systems) > 1:
        raise ValueError(f"comparison rows must share a system, got {sorted(systems)}")
    out = []
    for i, c1 in enumerate(rows):
        for c2 in rows[i + 1 :]:
            s1, s2 = c1.p_f < alpha, c2.p_f < alpha
            if s1 and not s2:
                verdict, reason = Verdict.SUPERIOR, "only first significant"
            elif s2 and not s1:
                verdict, reason = Verdict.INFERIOR, "only second significant"
            elif not s1 and not s2:
                verdict, reason = Verdict.TIE_INSIGNIFICANT, "both insignificant"
            elif c1.r2 > c2.r2:
                verdict, reason = Verdict.SUPERIOR, "both significant, first R2 larger"
            elif c2.r2 > c1.r2:
                verdict, reason = Verdict.INFERIOR, "both significant, second R2 larger"
            else:
                verdict, reason = Verdict.TIE_INSIGNIFICANT, "both significant, equal R2"
            out.append(Comparison(c1.system, c1.metric, c2.metric, verdict, reason))
    return out


@dataclass(frozen=True)
class Study:
    alpha: float
    min_os: int
    fp_source: FpSource
    systems: tuple[str, ...]
    rows: tuple[StudyRow, ...]
    comparisons: tuple[Comparison, ...]
    excluded_systems: tuple[tuple[str, int], ...]  # (system, n_os) below min_os

    def rows_for(self, system: str) -> list[StudyRow]:
        return [r for r in self.rows if r.system == system]

    def row(self, system: str, metric: MetricKind) -> StudyRow:
        for r in self.rows:
            if r.system == system and r.metric is metric:
                return r
        raise KeyError((system, metric))

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "min_os": self.min_os,
            "fp_source": self.fp_source.value,
            "systems": list(self.systems),
            "rows": [r.to_json_dict() for r in self.rows],
            "comparisons": [c.to_json_dict() for c in self.comparisons],
            "excluded_systems": [[s, n] for s, n in self.excluded_systems],
        }

    def text_table(self) -> str:
        """Fixed-width study table: systems as columns, metric row groups."""
        if not self.systems:
            return "study: no system met the minimum order count"
        width = max(12, max(len(s) for s in self.systems) + 2)
        lines = [f"{'System':28s}" + "".join(f"{s:>{width}s}" for s in self.systems)]

        def row(label: str, cells: list[str]) -> None:
            lines.append(f"{label:28s}" + "".join(f"{c:>{width}s}" for c in cells))

        row("Quantity of OS", [str(self.row(s, MetricKind.FP).n_os) for s in self.systems])
        row("Quantity of Requests", [str(self.row(s, MetricKind.FP).n_requests) for s in self.systems])
        for metric in METRIC_ORDER:
            row(f"{metric.value}  R2", [f"{self.row(s, metric).r2 * 100:.1f}%" for s in self.systems])
            row("    p-value (F test)", [f"{self.row(s, metric).p_f:.1E}" for s in self.systems])
            if metric is not MetricKind.FP:
                cells = []
                for s in self.systems:
                    prop = self.row(s, metric).prop_to_fp
                    cells.append("n/a" if prop is None else f"{prop * 100:+.0f}%")
                row("    proportion to FP R2", cells)
        return "\n".join(lines)


def build_study(
    orders: Iterable[ServiceOrder],
    coeffs: CoefficientSet | None = None,
    alpha: float = DEFAULT_ALPHA,
    min_os: int = DEFAULT_MIN_OS,
    fp_source: FpSource = FpSource.COLUMN,
) -> Study:
    """The full per-system, per-metric correlation study."""
    orders = list(orders)
    retained = filter_systems(orders, min_os=min_os)
    counts: dict[str, int] = {}
    for o in orders:
        counts[o.system] = counts.get(o.system, 0) + 1
    excluded = tuple((s, n) for s, n in sorted(counts.items()) if s not in retained)

    rows: list[StudyRow] = []
    comparisons: list[Comparison] = []
    for system, sys_orders in retained.items():
        sys_rows = [
            correlate(system, sys_orders, metric, coeffs, fp_source) for metric in METRIC_ORDER
        ]
        r2_fp = sys_rows[0].r2
        sys_rows = [
            r
            if r.metric is MetricKind.FP
            else replace(r, prop_to_fp=(r.r2 / r2_fp - 1.0) if r2_fp > 0 else None)
            for r in sys_rows
        ]
        rows.extend(sys_rows)
        comparisons.extend(compare(sys_rows, alpha=alpha))
    return Study(
        alpha=alpha,
        min_os=min_os,
        fp_source=fp_source,
        systems=tuple(retained),
        rows=tuple(rows),
        comparisons=tuple(comparisons),
        excluded_systems=excluded,
    )
