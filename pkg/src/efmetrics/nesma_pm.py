"""NESMA-style enhancement sizing: impact factors and maintenance points.

A maintenance request is sized as the original function's FP multiplied
by an impact factor: the proportion of the function's attribute volume
that the change touched, rounded up to a multiple of 25% and clamped to
[25%, 150%].  New development counts at 100%, deletions at the 25% floor.
The resulting unit is the maintenance point (PM).
"""

from __future__ import annotations

from .ef_metric import RequestOperation
from .fpa_core import AttributeCounts

IMPACT_STEP = 25
IMPACT_MIN = 25
IMPACT_MAX = 150
IMPACT_PERCENTS = tuple(range(IMPACT_MIN, IMPACT_MAX + 1, IMPACT_STEP))


class NoOriginalAttributes(ValueError):
    """Impact factor requested for a function with no original attributes."""


def impact_percent(orig: AttributeCounts, opa: AttributeCounts) -> int:
    """Impact factor (percent) of a change, from attribute volumes.

    Per attribute category with a nonzero original count, the ratio
    impacted/original is rounded up to the next multiple of 25%; the
    factor is the larger of the two, clamped to [25, 150].  Integer
    arithmetic throughout, so boundaries are exact.
    """
    if orig.files == 0 and orig.det == 0:
        raise NoOriginalAttributes("original attribute counts are both zero")
    pct = 0
    for impacted, original in ((opa.files, orig.files), (opa.det, orig.det)):
        if original > 0:
            # 25 * ceil((100 * impacted / original) / 25)
            pct = max(pct, IMPACT_STEP * -(-4 * impacted // original))
    return min(max(pct, IMPACT_MIN), IMPACT_MAX)


def pm_of_request(
    op: RequestOperation,
    fp: int,
    orig: AttributeCounts | None = None,
    opa: AttributeCounts | None = None,
    pct: int | None = None,
) -> float:
    """Maintenance points of one request.

    ``fp`` is the function's FP size (final for inclusions, original for
    alterations).  For alterations the factor comes from ``pct`` when the
    data source recorded one, else from ``impact_percent(orig, opa)``.
    """
    if op is RequestOperation.INCLUDE:
        return fp * 1.0
    if op is RequestOperation.EXCLUDE:
        return fp * 0.25
    if pct is None:
        if orig is None or opa is None:
            raise NoOriginalAttributes(
                "alteration requires original and operation attribute counts"
            )
        pct = impact_percent(orig, opa)
    if pct not in IMPACT_PERCENTS:
        raise ValueError(f"impact percent must be one of {IMPACT_PERCENTS}, got {pct}")
    return fp * (pct / 100.0)
