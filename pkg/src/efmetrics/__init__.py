"""efmetrics: functional size measurement and its use in IT governance.

Sizes software under classic IFPUG function points, the Functional
Elements metrics (EF / EFt / EFd) derived from them, and NESMA-style
maintenance points; regenerates the EF coefficients from first
principles; evaluates any of the metrics against recorded effort on
service-order datasets; and renders governance indicators as a
multi-indicator column chart.
"""

__version__ = "0.1.0"

from .dataset import (
    IngestReport,
    MalformedHeader,
    RequestRecord,
    ServiceOrder,
    filter_systems,
    parse_csv,
)
from .derivation import BoundingRule, derive_all, generate_points
from .ef_metric import (
    DEFAULT_COEFFICIENTS,
    CoefficientSet,
    EfBreakdown,
    MissingOperationAttributes,
    RequestOperation,
    TypeCoefficients,
    aggregate,
    ef_of_function,
    ef_of_request,
    load_coefficients,
)
from .evaluation import (
    FpSource,
    MetricKind,
    Study,
    StudyRow,
    TooFewOrders,
    Verdict,
    build_study,
    correlate,
    os_size,
)
from .fpa_core import (
    AttributeCounts,
    ComplexityLevel,
    ComplexityTable,
    FunctionCategory,
    FunctionType,
    OutOfDomain,
    complexity,
    fp_size,
    standard_tables,
    total_fp,
)
from .governance import (
    ChartLayout,
    ChartRow,
    IndicatorKind,
    IndicatorValue,
    PeriodLog,
    PeriodRequest,
    compute_dashboard,
    compute_indicators,
    render_chart,
)
from .nesma_pm import IMPACT_PERCENTS, NoOriginalAttributes, impact_percent, pm_of_request
from .regression_stats import (
    DomainError,
    RankDeficient,
    RegressionResult,
    TooFewRows,
    f_p_value,
    ols_zero_intercept,
    reg_inc_beta,
    t_p_value,
)

__all__ = [
    "__version__",
    "AttributeCounts",
    "BoundingRule",
    "ChartLayout",
    "ChartRow",
    "CoefficientSet",
    "ComplexityLevel",
    "ComplexityTable",
    "DEFAULT_COEFFICIENTS",
    "DomainError",
    "EfBreakdown",
    "FpSource",
    "FunctionCategory",
    "FunctionType",
    "IMPACT_PERCENTS",
    "IndicatorKind",
    "IndicatorValue",
    "IngestReport",
    "MalformedHeader",
    "MetricKind",
    "MissingOperationAttributes",
    "NoOriginalAttributes",
    "OutOfDomain",
    "PeriodLog",
    "PeriodRequest",
    "RankDeficient",
    "RegressionResult",
    "RequestOperation",
    "RequestRecord",
    "ServiceOrder",
    "Study",
    "StudyRow",
    "TooFewOrders",
    "TooFewRows",
    "TypeCoefficients",
    "Verdict",
    "aggregate",
    "build_study",
    "complexity",
    "compute_dashboard",
    "compute_indicators",
    "correlate",
    "derive_all",
    "ef_of_function",
    "ef_of_request",
    "f_p_value",
    "filter_systems",
    "fp_size",
    "generate_points",
    "impact_percent",
    "load_coefficients",
    "ols_zero_intercept",
    "os_size",
    "parse_csv",
    "pm_of_request",
    "reg_inc_beta",
    "render_chart",
    "standard_tables",
    "t_p_value",
    "total_fp",
]
