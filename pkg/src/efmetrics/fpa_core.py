"""IFPUG-style function point sizing.

A function (transaction or logical data file) is classified into one of
three complexity levels by looking up its two functional attribute counts
in a per-type 3x3 range table; each level maps to a fixed size in
function points (FP).  The five function types are:

    EI   external input        (transaction: data update)
    EO   external output       (transaction: elaborate query, e.g. totals)
    EQ   external inquiry      (transaction: simple query)
    ILF  internal logical file (data maintained by the application)
    EIF  external interface file (data only referenced)

Transactions are rated by referenced files (FTR) and fields crossing the
boundary (DET); data files by logical records (RET) and stored fields
(DET).  ``AttributeCounts.files`` carries FTR or RET depending on the
function's category.

The tables here are the standard IFPUG CPM 4.3.1 derivation rules.  They
can be serialized to JSON (see ``tables_to_json_dict``) so alternate rule
sets can be loaded without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, IntEnum
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping


class OutOfDomain(ValueError):
    """Attribute counts fall outside a complexity table's domain."""


class FunctionCategory(Enum):
    TRANSACTION = "transaction"
    DATA_FILE = "data_file"


class FunctionType(Enum):
    EI = "EI"
    EO = "EO"
    EQ = "EQ"
    ILF = "ILF"
    EIF = "EIF"

    @property
    def category(self) -> FunctionCategory:
        if self in (FunctionType.EI, FunctionType.EO, FunctionType.EQ):
            return FunctionCategory.TRANSACTION
        return FunctionCategory.DATA_FILE

    @property
    def is_transaction(self) -> bool:
        return self.category is FunctionCategory.TRANSACTION


class ComplexityLevel(IntEnum):
    """Totally ordered: LOW < MEDIUM < HIGH."""

    LOW = 0
    MEDIUM = 1
    HIGH = 2

    @property
    def letter(self) -> str:
        return "LMH"[self.value]


@dataclass(frozen=True)
class AttributeCounts:
    """The (FTR-or-RET, DET) pair rated by a complexity table.

    ``files`` is FTR for transactions and RET for data files; ``det`` is
    the number of data element types.  Both must be non-negative; whether
    a given pair is *sizable* additionally depends on the table's lower
    bounds (e.g. det >= 1 everywhere, files >= 1 for EQ/ILF/EIF).
    """

    files: int
    det: int

    def __post_init__(self) -> None:
        if self.files < 0 or self.det < 0:
            raise ValueError(f"attribute counts must be non-negative, got {self}")


# A range is (lo, hi); hi is None for the open-ended third range.
Interval = tuple[int, "int | None"]


@dataclass(frozen=True)
class ComplexityTable:
    """3x3 derivation table: attribute ranges -> complexity -> FP size.

    ``file_ranges`` and ``det_ranges`` each hold three ascending,
    contiguous intervals; the third is unbounded above (hi=None).
    ``level_matrix[row][col]`` gives the complexity for the file-range row
    and det-range column; ``fp_by_level`` is indexed by ComplexityLevel.
    """

    file_ranges: tuple[Interval, Interval, Interval]
    det_ranges: tuple[Interval, Interval, Interval]
    level_matrix: tuple[tuple[ComplexityLevel, ...], ...]
    fp_by_level: tuple[int, int, int]

    def __post_init__(self) -> None:
        for name, ranges in (("file", self.file_ranges), ("det", self.det_ranges)):
            if len(ranges) != 3:
                raise ValueError(f"{name}_ranges must have 3 intervals")
            for i, (lo, hi) in enumerate(ranges):
                if i < 2:
                    if hi is None or hi < lo:
                        raise ValueError(f"{name} interval {i} malformed: {(lo, hi)}")
                    nxt_lo = ranges[i + 1][0]
                    if nxt_lo != hi + 1:
                        raise ValueError(f"{name} intervals not contiguous at {i}")
        if len(self.level_matrix) != 3 or any(len(r) != 3 for r in self.level_matrix):
            raise ValueError("level_matrix must be 3x3")
        for r in range(3):
            for c in range(3):
                if c and self.level_matrix[r][c] < self.level_matrix[r][c - 1]:
                    raise ValueError("level_matrix not monotone along rows")
                if r and self.level_matrix[r][c] < self.level_matrix[r - 1][c]:
                    raise ValueError("level_matrix not monotone along columns")
        if len(self.fp_by_level) != 3 or any(fp <= 0 for fp in self.fp_by_level):
            raise ValueError("fp_by_level must hold 3 positive sizes")

    @staticmethod
    def _index(ranges: tuple[Interval, ...], value: int, axis: str) -> int:
        for i, (lo, hi) in enumerate(ranges):
            if value >= lo and (hi is None or value <= hi):
                return i
        raise OutOfDomain(f"{axis}={value} below table minimum {ranges[0][0]}")

    def row_of(self, files: int) -> int:
        return self._index(self.file_ranges, files, "files")

    def col_of(self, det: int) -> int:
        return self._index(self.det_ranges, det, "det")

    def complexity_of(self, a: AttributeCounts) -> ComplexityLevel:
        return self.level_matrix[self.row_of(a.files)][self.col_of(a.det)]

    def fp_of(self, a: AttributeCounts) -> int:
        return self.fp_by_level[self.complexity_of(a)]

    def to_dict(self) -> dict:
        return {
            "file_ranges": [list(r) for r in self.file_ranges],
            "det_ranges": [list(r) for r in self.det_ranges],
            "levels": [[lvl.letter for lvl in row] for row in self.level_matrix],
            "fp": {lvl.letter: self.fp_by_level[lvl] for lvl in ComplexityLevel},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComplexityTable":
        by_letter = {"L": ComplexityLevel.LOW, "M": ComplexityLevel.MEDIUM, "H": ComplexityLevel.HIGH}
        return cls(
            file_ranges=tuple((int(lo), None if hi is None else int(hi)) for lo, hi in d["file_ranges"]),
            det_ranges=tuple((int(lo), None if hi is None else int(hi)) for lo, hi in d["det_ranges"]),
            level_matrix=tuple(tuple(by_letter[c] for c in row) for row in d["levels"]),
            fp_by_level=tuple(int(d["fp"][lvl]) for lvl in "LMH"),
        )


_L, _M, _H = ComplexityLevel.LOW, ComplexityLevel.MEDIUM, ComplexityLevel.HIGH

# All five standard tables share the same level matrix shape.
_SHARED_MATRIX = (
    (_L, _L, _M),
    (_L, _M, _H),
    (_M, _H, _H),
)


def _table(file_ranges, det_ranges, fp) -> ComplexityTable:
    return ComplexityTable(
        file_ranges=file_ranges,
        det_ranges=det_ranges,
        level_matrix=_SHARED_MATRIX,
        fp_by_level=fp,
    )


# CPM 4.3.1 derivation rules.  Lower bounds differ per type: EO/EI rate
# zero-FTR transactions, EQ/ILF/EIF start at 1 file/record; DET always
# starts at 1 for a whole function.
_STANDARD: dict[FunctionType, ComplexityTable] = {
    FunctionType.EI: _table(((0, 1), (2, 2), (3, None)), ((1, 4), (5, 15), (16, None)), (3, 4, 6)),
    FunctionType.EO: _table(((0, 1), (2, 3), (4, None)), ((1, 5), (6, 19), (20, None)), (4, 5, 7)),
    FunctionType.EQ: _table(((1, 1), (2, 3), (4, None)), ((1, 5), (6, 19), (20, None)), (3, 4, 6)),
    FunctionType.ILF: _table(((1, 1), (2, 5), (6, None)), ((1, 19), (20, 50), (51, None)), (7, 10, 15)),
    FunctionType.EIF: _table(((1, 1), (2, 5), (6, None)), ((1, 19), (20, 50), (51, None)), (5, 7, 10)),
}

_STANDARD_VIEW = MappingProxyType(_STANDARD)


def standard_tables() -> Mapping[FunctionType, ComplexityTable]:
    """The built-in CPM 4.3.1 complexity tables, immutable."""
    return _STANDARD_VIEW


def complexity(
    ft: FunctionType,
    a: AttributeCounts,
    tables: Mapping[FunctionType, ComplexityTable] | None = None,
) -> ComplexityLevel:
    """Rate a function's complexity; raises OutOfDomain on unsizable counts."""
    return (tables or _STANDARD_VIEW)[ft].complexity_of(a)


def fp_size(
    ft: FunctionType,
    a: AttributeCounts,
    tables: Mapping[FunctionType, ComplexityTable] | None = None,
) -> int:
    """Function point size of a whole function."""
    return (tables or _STANDARD_VIEW)[ft].fp_of(a)


def total_fp(
    functions: Iterable[tuple[FunctionType, AttributeCounts]],
    tables: Mapping[FunctionType, ComplexityTable] | None = None,
) -> int:
    """Software FP size: the sum of its functions' sizes."""
    return sum(fp_size(ft, a, tables) for ft, a in functions)


def tables_to_json_dict(tables: Mapping[FunctionType, ComplexityTable]) -> dict:
    return {ft.value: tables[ft].to_dict() for ft in FunctionType}


def tables_from_json_dict(d: dict) -> Mapping[FunctionType, ComplexityTable]:
    out = {FunctionType(name): ComplexityTable.from_dict(body) for name, body in d.items()}
    missing = [ft.value for ft in FunctionType if ft not in out]
    if missing:
        raise ValueError(f"table config missing function types: {missing}")
    return MappingProxyType(out)


def load_tables(path: str | Path) -> Mapping[FunctionType, ComplexityTable]:
    with open(path, "r", encoding="utf-8") as f:
        return tables_from_json_dict(json.load(f))


def dump_tables(tables: Mapping[FunctionType, ComplexityTable], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(tables_to_json_dict(tables), f, indent=2)
        f.write("\n")
