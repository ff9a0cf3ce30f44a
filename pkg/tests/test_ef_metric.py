"""Functional Elements formulas and their advertised behavioral properties."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from efmetrics.derivation import bound_ranges
from efmetrics.ef_metric import (
    DEFAULT_COEFFICIENTS,
    CoefficientSet,
    EfBreakdown,
    MissingOperationAttributes,
    RequestOperation,
    TypeCoefficients,
    aggregate,
    coefficients_from_json_dict,
    coefficients_to_json_dict,
    ef_of_function,
    ef_of_request,
)
from efmetrics.fpa_core import AttributeCounts, FunctionType, standard_tables

EQ, EI, EO, ILF, EIF = (
    FunctionType.EQ,
    FunctionType.EI,
    FunctionType.EO,
    FunctionType.ILF,
    FunctionType.EIF,
)
I, A, E = RequestOperation.INCLUDE, RequestOperation.ALTER, RequestOperation.EXCLUDE


def test_default_coefficients_are_published_values():
    expected = {
        ILF: (1.75, 0.96, 0.12),
        EIF: (1.25, 0.65, 0.08),
        EO: (1.00, 0.81, 0.13),
        EI: (0.75, 0.91, 0.13),
        EQ: (0.75, 0.76, 0.10),
    }
    for ft, (c, cf, cd) in expected.items():
        entry = DEFAULT_COEFFICIENTS[ft]
        assert (entry.constant, entry.coef_files, entry.coef_det) == (c, cf, cd)


def test_ef_of_function_examples():
    assert ef_of_function(EQ, AttributeCounts(1, 5)) == pytest.approx(2.01, rel=1e-12)
    assert ef_of_function(ILF, AttributeCounts(0, 0)) == 1.75
    assert ef_of_function(EIF, AttributeCounts(1, 1)) == pytest.approx(1.98, rel=1e-12)


def test_coefficient_validation():
    with pytest.raises(ValueError):
        TypeCoefficients(-0.1, 0.5, 0.5)
    with pytest.raises(ValueError):
        TypeCoefficients(0.5, 0.0, 0.5)
    with pytest.raises(ValueError):
        CoefficientSet(by_type={EQ: TypeCoefficients(0.75, 0.76, 0.10)})


def test_ef_of_request_bookings():
    excl = ef_of_request(ILF, E)
    assert (excl.ef, excl.eft, excl.efd) == (1.75, 0.0, 1.75)

    algo_only = ef_of_request(
        EQ, A, final_attrs=AttributeCounts(3, 20), op_attrs=AttributeCounts(0, 0)
    )
    assert algo_only.eft == 0.75 and algo_only.efd == 0.0

    incl = ef_of_request(EI, I, final_attrs=AttributeCounts(2, 10))
    assert incl.eft == pytest.approx(3.87, rel=1e-12)
    assert incl.efd == 0.0


def test_ef_of_request_errors():
    with pytest.raises(MissingOperationAttributes):
        ef_of_request(EQ, A, final_attrs=AttributeCounts(3, 20))
    with pytest.raises(ValueError):
        ef_of_request(EQ, I)


def test_aggregate_examples():
    assert aggregate([]) == EfBreakdown.zero()

    total = aggregate(
        [
            ef_of_request(EQ, I, final_attrs=AttributeCounts(1, 5)),
            ef_of_request(ILF, E),
        ]
    )
    assert total.ef == pytest.approx(3.76, rel=1e-12)
    assert total.eft == pytest.approx(2.01, rel=1e-12)
    assert total.efd == pytest.approx(1.75, rel=1e-12)

    one_each = aggregate(
        ef_of_request(ft, I, final_attrs=AttributeCounts(1, 1)) for ft in FunctionType
    )
    assert one_each.efd == pytest.approx((1.75 + 0.96 + 0.12) + (1.25 + 0.65 + 0.08), rel=1e-12)
    assert one_each.eft == pytest.approx(
        (1.00 + 0.81 + 0.13) + (0.75 + 0.91 + 0.13) + (0.75 + 0.76 + 0.10), rel=1e-12
    )


def test_ef_equals_eft_plus_efd_exactly():
    rng = random.Random(11)
    parts = []
    for _ in range(300):
        ft = rng.choice(list(FunctionType))
        parts.append(ef_of_request(ft, I, final_attrs=AttributeCounts(rng.randint(0, 40), rng.randint(0, 99))))
    total = aggregate(parts)
    assert total.ef == total.eft + total.efd  # exact: ef is derived, not stored


@given(
    ft=st.sampled_from(list(FunctionType)),
    files=st.integers(min_value=0, max_value=500),
    det=st.integers(min_value=0, max_value=500),
)
def test_strict_monotonicity(ft, files, det):
    base = ef_of_function(ft, AttributeCounts(files, det))
    assert ef_of_function(ft, AttributeCounts(files + 1, det)) > base
    assert ef_of_function(ft, AttributeCounts(files, det + 1)) > base


@pytest.mark.parametrize("bound", [10.0, 1e3, 1e6, 1e9])
@pytest.mark.parametrize("ft", list(FunctionType))
def test_unbounded(ft, bound):
    det = int(bound / DEFAULT_COEFFICIENTS[ft].coef_det) + 1
    assert ef_of_function(ft, AttributeCounts(0, det)) > bound


@pytest.mark.parametrize("ft", list(FunctionType))
def test_richness_over_bounded_domain(ft):
    """FPA takes exactly 3 values there; EF takes many more."""
    bounded = bound_ranges(standard_tables()[ft])
    values = {
        ef_of_function(ft, AttributeCounts(f, d))
        for f in bounded.files_domain
        for d in bounded.det_domain
    }
    fp_values = {
        bounded.fp_of(f, d) for f in bounded.files_domain for d in bounded.det_domain
    }
    assert len(fp_values) == 3
    assert len(values) > 3


@given(
    ft=st.sampled_from(list(FunctionType)),
    final_files=st.integers(min_value=1, max_value=60),
    final_det=st.integers(min_value=1, max_value=120),
    data=st.data(),
)
def test_partial_change_sizes_below_full(ft, final_files, final_det, data):
    op_files = data.draw(st.integers(min_value=0, max_value=final_files))
    op_det = data.draw(st.integers(min_value=0, max_value=final_det))
    if (op_files, op_det) == (final_files, final_det):
        op_det -= 1  # force at least one strict componentwise decrease
    final = AttributeCounts(final_files, final_det)
    partial = ef_of_request(ft, A, final_attrs=final, op_attrs=AttributeCounts(op_files, op_det))
    full = ef_of_request(ft, I, final_attrs=final)
    assert partial.ef < full.ef


def test_linearity_exact_under_power_of_two_scaling():
    scaled = CoefficientSet(
        by_type={
            ft: TypeCoefficients(
                DEFAULT_COEFFICIENTS[ft].constant * 2.0,
                DEFAULT_COEFFICIENTS[ft].coef_files * 2.0,
                DEFAULT_COEFFICIENTS[ft].coef_det * 2.0,
            )
            for ft in FunctionType
        }
    )
    for ft in FunctionType:
        for files, det in [(0, 0), (1, 5), (7, 33), (12, 99)]:
            a = AttributeCounts(files, det)
            assert ef_of_function(ft, a, scaled) == 2.0 * ef_of_function(ft, a)


def test_coefficients_json_round_trip(tmp_path):
    doc = coefficients_to_json_dict(DEFAULT_COEFFICIENTS)
    loaded = coefficients_from_json_dict(doc)
    assert loaded == DEFAULT_COEFFICIENTS
    with pytest.raises(ValueError):
        coefficients_from_json_dict({"wrong": {}})
    incomplete = coefficients_to_json_dict(DEFAULT_COEFFICIENTS)
    del incomplete["coefficients"]["EQ"]
    with pytest.raises(ValueError):
        coefficients_from_json_dict(incomplete)
