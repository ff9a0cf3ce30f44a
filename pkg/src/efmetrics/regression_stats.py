"""Zero-intercept ordinary least squares with significance statistics.

The fits here force the constant to zero (no size, no effort; the
derivation already subtracts its constants), so R-squared is computed
against the uncentered total sum of squares sum(y^2) by default, the
convention spreadsheet regression tools apply to forced-zero intercepts.
The centered value is reported alongside for transparency.

Tail probabilities (two-tailed t, upper-tail F) are evaluated through the
regularized incomplete beta function, implemented with a continued
fraction plus the usual symmetry switch.  Because coefficient p-values in
the table reproductions fall below 1e-200, every p-value is also computed
in log space (``log10_p_*``) so magnitudes survive even where the linear
value would lose precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_LN10 = math.log(10.0)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)
_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 5000
_STIRLING_Z = 15.0


class TooFewRows(ValueError):
    """Fewer observations than regressors (plus one)."""


class RankDeficient(ValueError):
    """Design matrix has linearly dependent columns."""


class DomainError(ValueError):
    """Argument outside the mathematical domain."""


@dataclass(frozen=True)
class RegressionResult:
    """Zero-intercept OLS fit plus the usual significance statistics.

    ``r2_uncentered`` is 1 - SSE/sum(y^2); ``r2_centered`` uses the mean-
    centered total sum of squares and can be negative for through-origin
    fits.  ``log10_p_coeffs``/``log10_p_f`` are exact log-space
    counterparts of the p-values (two-tailed t, upper-tail F).
    """

    coeffs: tuple[float, ...]
    std_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_coeffs: tuple[float, ...]
    log10_p_coeffs: tuple[float, ...]
    r2_uncentered: float
    r2_centered: float
    f_stat: float
    p_f: float
    log10_p_f: float
    sse: float
    sst_uncentered: float
    n: int
    k: int

    @property
    def df_resid(self) -> int:
        return self.n - self.k


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction stalled (a={a}, b={b}, x={x})")


def _binet(z: float) -> float:
    """Stirling remainder J(z): lgamma(z) = (z-1/2)ln z - z + ln(2pi)/2 + J(z)."""
    if z >= _STIRLING_Z:
        w = 1.0 / (z * z)
        # asymptotic series, truncation below 1e-15 for z >= 15
        return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - w / 1188.0) * w) * w) * w) / z
    return math.lgamma(z) - ((z - 0.5) * math.log(z) - z + _HALF_LN_2PI)


def _log_beta_small_min(small: float, big: float) -> float:
    """ln B for min < 15 <= max, avoiding the large-lgamma cancellation."""
    # lgamma(big) - lgamma(big+small) expressed through Stirling differences
    diff = (big - 0.5) * math.log1p(small / big) + small * math.log(big + small) - small
    return math.lgamma(small) - diff - _binet(big + small) + _binet(big)


def _log_front(a: float, b: float, x: float, xc: float) -> float:
    """ln of x^a xc^b / B(a,b), with xc the pre-computed complement of x.

    For two large shape parameters the lgamma differences in ln B cancel
    to ~1e-11 absolute, so the Stirling main terms are combined with the
    power terms analytically; near the mean (where that combination
    itself cancels) the joint log1p series is summed directly with an
    exactly rounded u = x*b - xc*a.
    """
    lo, hi = min(a, b), max(a, b)
    if lo >= _STIRLING_Z:
        s = a + b
        u = float(Fraction(x) * Fraction(b) - Fraction(xc) * Fraction(a))  # = x*s - a, exact
        if abs(u) <= 0.5 * lo:
            t, w = u / a, -u / b
            tp, wq, g, k = t, w, 0.0, 1
            while True:
                k += 1
                tp *= t
                wq *= w
                sign = 1.0 if k % 2 else -1.0
                g += sign * (a * tp + b * wq) / k
                # bound, not the (possibly exactly zero) signed term: with
                # |t|,|w| <= 1/2 the dropped tail is below this bound
                if (a * abs(tp) + b * abs(wq)) / k <= 1e-17 * abs(g) + _CF_TINY or k > 200:
                    break
        else:
            g = a * math.log1p(u / a) + b * math.log1p(-u / b)
        corr = _binet(a) + _binet(b) - _binet(s)
        return g + 0.5 * math.log(a * b / (2.0 * math.pi * s)) - corr
    if hi >= _STIRLING_Z:
        lbeta = _log_beta_small_min(lo, hi)
    else:
        lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    return a * math.log(x) + b * math.log(xc) - lbeta


def _check_beta_args(a: float, b: float, x: float) -> None:
    if not (a > 0 and b > 0):
        raise DomainError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b).

    Continued fraction on whichever side of the symmetry switch
    x < (a+1)/(a+b+2) converges fast; the other side goes through
    I_x(a,b) = 1 - I_{1-x}(b,a).
    """
    _check_beta_args(a, b, x)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    xc = 1.0 - x
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(_log_front(a, b, x, xc)) * _betacf(a, b, x) / a
    return 1.0 - math.exp(_log_front(b, a, xc, x)) * _betacf(b, a, xc) / b


def log_reg_inc_beta(a: float, b: float, x: float) -> float:
    """ln I_x(a, b), stable for tails far below double underflow."""
    _check_beta_args(a, b, x)
    if x == 0.0:
        return -math.inf
    if x == 1.0:
        return 0.0
    xc = 1.0 - x
    if x < (a + 1.0) / (a + b + 2.0):
        return _log_front(a, b, x, xc) + math.log(_betacf(a, b, x) / a)
    # Complement side: the switch keeps I_{1-x}(b,a) away from 1, so the
    # subtraction from 1 loses no significant digits.
    return math.log1p(-math.exp(_log_front(b, a, xc, x)) * _betacf(b, a, xc) / b)


def t_p_value(t: float, df: int) -> float:
    """Two-tailed Student-t tail probability."""
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))


def t_log10_p_value(t: float, df: int) -> float:
    """log10 of the two-tailed t probability, computed in log space."""
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    if math.isinf(t):
        return -math.inf
    return log_reg_inc_beta(df / 2.0, 0.5, df / (df + t * t)) / _LN10


def f_p_value(f: float, d1: int, d2: int) -> float:
    """Upper-tail F probability P(F >= f) with (d1, d2) degrees of freedom."""
    if d1 < 1 or d2 < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    if f < 0:
        raise DomainError(f"F statistic must be non-negative, got {f}")
    if math.isinf(f):
        return 0.0
    return reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))


def f_log10_p_value(f: float, d1: int, d2: int) -> float:
    if d1 < 1 or d2 < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    if f < 0:
        raise DomainError(f"F statistic must be non-negative, got {f}")
    if math.isinf(f):
        return -math.inf
    return log_reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)) / _LN10


def ols_zero_intercept(x, y) -> RegressionResult:
    """Least-squares fit of y on x with the intercept held at zero.

    ``x`` is n-by-k (a 1-d array is treated as a single regressor);
    requires n > k >= 1 and full column rank.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise ValueError(f"incompatible shapes x{x.shape}, y{y.shape}")
    n, k = x.shape
    if k < 1:
        raise ValueError("need at least one regressor")
    if n <= k:
        raise TooFewRows(f"need more rows than regressors, got n={n}, k={k}")

    beta, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    if rank < k:
        raise RankDeficient(f"design matrix rank {rank} < {k}")

    resid = y - x @ beta
    sse = float(resid @ resid)
    sst_unc = float(y @ y)
    sst_cen = float(np.sum((y - y.mean()) ** 2))
    df = n - k

    sigma2 = sse / df
    xtx_inv = np.linalg.inv(x.T @ x)
    se = np.sqrt(np.maximum(sigma2 * np.diag(xtx_inv), 0.0))
    t_list = []
    for b, s in zip(beta, se):
        if s > 0.0:
            t_list.append(float(b / s))
        elif b == 0.0:
            t_list.append(0.0)  # exact fit of a null coefficient
        else:
            t_list.append(math.copysign(math.inf, b))
    t_stats = tuple(t_list)
    p_coeffs = tuple(t_p_value(abs(t), df) for t in t_stats)
    log10_p = tuple(t_log10_p_value(abs(t), df) for t in t_stats)

    if sse > 0.0:
        f_stat = ((sst_unc - sse) / k) / (sse / df)
        f_stat = max(f_stat, 0.0)
    else:
        f_stat = math.inf
    p_f = f_p_value(f_stat, k, df)
    log10_p_f = f_log10_p_value(f_stat, k, df)

    r2_unc = 1.0 - sse / sst_unc if sst_unc > 0.0 else float("nan")
    r2_cen = 1.0 - sse / sst_cen if sst_cen > 0.0 else float("nan")

    return RegressionResult(
        coeffs=tuple(float(b) for b in beta),
        std_errors=tuple(float(s) for s in se),
        t_stats=t_stats,
        p_coeffs=p_coeffs,
        log10_p_coeffs=log10_p,
        r2_uncentered=r2_unc,
        r2_centered=r2_cen,
        f_stat=float(f_stat),
        p_f=float(p_f),
        log10_p_f=float(log10_p_f),
        sse=sse,
        sst_uncentered=sst_unc,
        n=n,
        k=k,
    )
