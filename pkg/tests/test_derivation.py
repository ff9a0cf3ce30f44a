"""Coefficient regeneration: bounded domains, point sets, fits, report."""

import pytest

from efmetrics.derivation import (
    PUBLISHED_R2,
    PUBLISHED_RECORD_COUNTS,
    PUBLISHED_COEFFICIENTS,
    BoundingRule,
    bound_ranges,
    constants,
    derivation_output_json_dict,
    derive_all,
    fit_type,
    generate_points,
    range_combinations,
    round_half_up,
)
from efmetrics.ef_metric import DEFAULT_COEFFICIENTS, coefficients_from_json_dict
from efmetrics.fpa_core import ComplexityLevel, FunctionType, standard_tables

EQ, EI, EO, ILF, EIF = (
    FunctionType.EQ,
    FunctionType.EI,
    FunctionType.EO,
    FunctionType.ILF,
    FunctionType.EIF,
)


def test_constants_published_values():
    assert constants() == {EIF: 1.25, ILF: 1.75, EQ: 0.75, EI: 0.75, EO: 1.00}


def test_constants_are_quarter_of_low_fp():
    for ft, c in constants().items():
        assert c == 0.25 * standard_tables()[ft].fp_by_level[ComplexityLevel.LOW]


def test_bounded_axes():
    eq = bound_ranges(standard_tables()[EQ])
    assert eq.det_ranges[2] == (20, 33)
    assert eq.file_ranges[2] == (4, 5)
    ilf = bound_ranges(standard_tables()[ILF])
    assert ilf.file_ranges[2] == (6, 9)
    assert ilf.det_ranges[2] == (51, 81)
    ei = bound_ranges(standard_tables()[EI])
    assert ei.file_ranges[2] == (3, 4)
    assert ei.det_ranges[2] == (16, 26)
    eo = bound_ranges(standard_tables()[EO])
    assert eo.file_ranges[2] == (4, 5)
    assert eo.det_ranges[2] == (20, 33)
    # closed third range width equals the widest preceding range
    for ft in FunctionType:
        b = bound_ranges(standard_tables()[ft])
        for ranges in (b.file_ranges, b.det_ranges):
            widths = [hi - lo + 1 for lo, hi in ranges]
            assert widths[2] == max(widths[0], widths[1])


def test_point_counts_match_published_records():
    for ft, expected in PUBLISHED_RECORD_COUNTS.items():
        assert len(generate_points(ft)) == expected


@pytest.mark.parametrize("ft", list(FunctionType))
def test_points_exhaustive_and_duplicate_free(ft):
    points = generate_points(ft)
    pairs = {(p.files, p.det) for p in points}
    assert len(pairs) == len(points)
    bounded = bound_ranges(standard_tables()[ft])
    assert len(points) == len(bounded.files_domain) * len(bounded.det_domain)
    assert all(p.target > 0 for p in points)


def test_eq_point_targets():
    by_pair = {(p.files, p.det): p.target for p in generate_points(EQ)}
    assert by_pair[(1, 1)] == 2.25
    assert by_pair[(1, 33)] == 3.25


def test_eq_range_combinations_reproduced():
    rows = [
        (c.files_lo, c.files_hi, c.det_lo, c.det_hi, c.fp, c.target)
        for c in range_combinations(EQ)
    ]
    assert rows == [
        (1, 1, 1, 5, 3, 2.25),
        (1, 1, 6, 19, 3, 2.25),
        (1, 1, 20, 33, 4, 3.25),
        (2, 3, 1, 5, 3, 2.25),
        (2, 3, 6, 19, 4, 3.25),
        (2, 3, 20, 33, 6, 5.25),
        (4, 5, 1, 5, 4, 3.25),
        (4, 5, 6, 19, 6, 5.25),
        (4, 5, 20, 33, 6, 5.25),
    ]


def test_round_half_up():
    assert round_half_up(0.125) == 0.13
    assert round_half_up(0.124999) == 0.12
    assert round_half_up(0.098336) == 0.10
    assert round_half_up(2.675) == 2.68  # plain round() would give 2.67


@pytest.mark.parametrize("ft", list(FunctionType))
def test_fit_rounds_to_published_coefficients(ft):
    entry, result = fit_type(ft)
    assert entry.coef_files > 0 and entry.coef_det > 0
    rounded = (round_half_up(entry.coef_files), round_half_up(entry.coef_det))
    assert rounded == PUBLISHED_COEFFICIENTS[ft]
    assert result.n == PUBLISHED_RECORD_COUNTS[ft]


def test_ilf_r2_matches_published():
    _, result = fit_type(ILF)
    assert result.r2_uncentered == pytest.approx(0.96363, abs=1e-5)


def test_derive_all_standard():
    coeffs, report = derive_all()
    assert report.flags == ()
    assert report.standard
    assert {t.ftype: t.records for t in report.types} == PUBLISHED_RECORD_COUNTS
    for t in report.types:
        assert (t.rounded_files, t.rounded_det) == PUBLISHED_COEFFICIENTS[t.ftype]
        assert abs(t.r2_uncentered - PUBLISHED_R2[t.ftype]) <= 0.01
    # operative set equals the built-in published defaults
    assert coeffs == DEFAULT_COEFFICIENTS


def test_derive_all_deterministic():
    first = derive_all()
    second = derive_all()
    assert first == second


def test_type_order_in_report():
    _, report = derive_all()
    assert [t.ftype for t in report.types] == [EI, EO, EQ, ILF, EIF]


def test_output_json_round_trips_into_coefficient_set():
    coeffs, report = derive_all()
    doc = derivation_output_json_dict(coeffs, report)
    assert coefficients_from_json_dict(doc) == DEFAULT_COEFFICIENTS
    assert doc["bounding_rule"] == "widest"
    assert set(doc["fitted_full_precision"]) == {ft.value for ft in FunctionType}


def test_sum_of_ranges_variant_is_labeled_and_uncompared():
    coeffs, report = derive_all(BoundingRule.SUM_OF_RANGES)
    assert not report.standard
    assert report.flags == ()  # no published comparison applies
    eq_points = generate_points(EQ, BoundingRule.SUM_OF_RANGES)
    # EQ: files 1..6 (third range width 1+2), det 1..38 (width 5+14)
    assert len(eq_points) == 6 * 38
    assert "non-standard" in report.text_table()
    assert {t.expected_rounded for t in report.types} == {None}
    # the variant must actually move at least one coefficient
    assert coeffs != DEFAULT_COEFFICIENTS
