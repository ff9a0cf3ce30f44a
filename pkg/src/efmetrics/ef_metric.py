"""Functional Elements (EF) sizing.

EF replaces the 3-level FP lookup with a per-type linear form

    size = constant + coef_files * files + coef_det * det

so every distinct attribute combination gets a distinct size, sizes are
unbounded, increments are uniform (no range cliffs), and a change that
touches only part of a function can be sized from the attributes it
impacts.  The value of a transaction (EI/EO/EQ) is booked as EFt, of a
data file (ILF/EIF) as EFd, and EF = EFt + EFd.

The default coefficients are the published 2-decimal values; the
derivation module regenerates them from the FP tables and emits the same
JSON config this module loads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .fpa_core import AttributeCounts, FunctionType


class MissingOperationAttributes(ValueError):
    """An alteration request was sized without its impacted-attribute counts."""


class RequestOperation(Enum):
    INCLUDE = "I"
    ALTER = "A"
    EXCLUDE = "E"


@dataclass(frozen=True)
class TypeCoefficients:
    """One function type's EF formula: constant + coef_files*files + coef_det*det."""

    constant: float
    coef_files: float
    coef_det: float

    def __post_init__(self) -> None:
        if self.constant < 0:
            raise ValueError(f"constant must be >= 0, got {self.constant}")
        if self.coef_files <= 0 or self.coef_det <= 0:
            raise ValueError(f"attribute coefficients must be > 0, got {self}")

    def value_at(self, a: AttributeCounts) -> float:
        return self.constant + self.coef_files * a.files + self.coef_det * a.det


@dataclass(frozen=True)
class CoefficientSet:
    by_type: Mapping[FunctionType, TypeCoefficients]

    def __post_init__(self) -> None:
        missing = [ft.value for ft in FunctionType if ft not in self.by_type]
        if missing:
            raise ValueError(f"coefficient set missing function types: {missing}")

    def __getitem__(self, ft: FunctionType) -> TypeCoefficients:
        return self.by_type[ft]


# Published formulas, constants = 25% of each type's low-complexity FP.
DEFAULT_COEFFICIENTS = CoefficientSet(
    by_type={
        FunctionType.ILF: TypeCoefficients(1.75, 0.96, 0.12),
        FunctionType.EIF: TypeCoefficients(1.25, 0.65, 0.08),
        FunctionType.EO: TypeCoefficients(1.00, 0.81, 0.13),
        FunctionType.EI: TypeCoefficients(0.75, 0.91, 0.13),
        FunctionType.EQ: TypeCoefficients(0.75, 0.76, 0.10),
    }
)


@dataclass(frozen=True)
class EfBreakdown:
    """EF split into its transaction (EFt) and data (EFd) components."""

    eft: float
    efd: float

    @property
    def ef(self) -> float:
        return self.eft + self.efd

    def __add__(self, other: "EfBreakdown") -> "EfBreakdown":
        return EfBreakdown(self.eft + other.eft, self.efd + other.efd)

    @classmethod
    def zero(cls) -> "EfBreakdown":
        return cls(0.0, 0.0)


def ef_of_function(
    ft: FunctionType,
    a: AttributeCounts,
    coeffs: CoefficientSet | None = None,
) -> float:
    """EF of a whole function (or of an attribute delta; counts may be zero)."""
    return (coeffs or DEFAULT_COEFFICIENTS)[ft].value_at(a)


def ef_of_request(
    ft: FunctionType,
    op: RequestOperation,
    final_attrs: AttributeCounts | None = None,
    op_attrs: AttributeCounts | None = None,
    coeffs: CoefficientSet | None = None,
) -> EfBreakdown:
    """EF contribution of one request, booked under EFt or EFd by type.

    Inclusions are sized from the function's final attributes;
    alterations from the attributes the change impacted (included,
    altered, or excluded ones, possibly zero); exclusions take the type
    constant, since no attribute is specifically impacted.
    """
    c = (coeffs or DEFAULT_COEFFICIENTS)[ft]
    if op is RequestOperation.INCLUDE:
        if final_attrs is None:
            raise ValueError("inclusion requires final attribute counts")
        value = c.value_at(final_attrs)
    elif op is RequestOperation.ALTER:
        if op_attrs is None:
            raise MissingOperationAttributes(
                f"alteration of {ft.value} requires operation attribute counts"
            )
        value = c.value_at(op_attrs)
    else:
        value = c.constant
    if ft.is_transaction:
        return EfBreakdown(eft=value, efd=0.0)
    return EfBreakdown(eft=0.0, efd=value)


def aggregate(parts: Iterable[EfBreakdown]) -> EfBreakdown:
    """Componentwise sum; EF = EFt + EFd holds by construction."""
    total = EfBreakdown.zero()
    for p in parts:
        total = total + p
    return total


def coefficients_to_json_dict(coeffs: CoefficientSet) -> dict:
    return {
        "coefficients": {
            ft.value: {
                "constant": coeffs[ft].constant,
                "coef_files": coeffs[ft].coef_files,
                "coef_det": coeffs[ft].coef_det,
            }
            for ft in FunctionType
        }
    }


def coefficients_from_json_dict(d: dict) -> CoefficientSet:
    try:
        body = d["coefficients"]
    except (TypeError, KeyError) as exc:
        raise ValueError("coefficient config must carry a 'coefficients' mapping") from exc
    by_type = {}
    for name, entry in body.items():
        by_type[FunctionType(name)] = TypeCoefficients(
            constant=float(entry["constant"]),
            coef_files=float(entry["coef_files"]),
            coef_det=float(entry["coef_det"]),
        )
    return CoefficientSet(by_type=by_type)


def load_coefficients(path: str | Path) -> CoefficientSet:
    with open(path, "r", encoding="utf-8") as f:
        return coefficients_from_json_dict(json.load(f))


def dump_coefficients(coeffs: CoefficientSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(coefficients_to_json_dict(coeffs), f, indent=2)
        f.write("\n")
