"""Self-contained statistical kernel.

Implements the estimators the report pipeline needs (Spearman rank
correlation, ordinary least squares, one-way ANOVA, a power-based sample
size search) without runtime dependencies beyond numpy.  Student-t and F
tail probabilities are both routed through one regularized incomplete
beta implementation so every p-value in the package shares a single
numerical core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AnovaResult",
    "CorrelationResult",
    "RankDeficiencyError",
    "RegressionResult",
    "correlation_band",
    "min_sample_size",
    "ols",
    "one_way_anova",
    "regularized_incomplete_beta",
    "spearman",
    "t_tail",
    "two_sample_power",
]

_BETA_MAX_ITER = 300
_BETA_EPS = 1e-15
_BETA_TINY = 1e-300


class RankDeficiencyError(ValueError):
    """Design matrix has linearly dependent columns.

    ``columns`` lists the offending columns by label.  A column is
    offending when it is linearly dependent on the columns to its left,
    the intercept included, so callers can drop exactly those columns
    and refit.
    """

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        super().__init__(
            "design matrix is rank deficient; dependent columns: "
            + ", ".join(str(c) for c in self.columns)
        )


def _beta_cont_frac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, modified Lentz method."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETA_TINY:
        d = _BETA_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        numer = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numer * d
        if abs(d) < _BETA_TINY:
            d = _BETA_TINY
        c = 1.0 + numer / c
        if abs(c) < _BETA_TINY:
            c = _BETA_TINY
        d = 1.0 / d
        h *= d * c
        numer = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numer * d
        if abs(d) < _BETA_TINY:
            d = _BETA_TINY
        c = 1.0 + numer / c
        if abs(c) < _BETA_TINY:
            c = _BETA_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Uses the continued fraction expansion with the standard symmetry
    switch at x = (a + 1) / (a + b + 2); either branch then converges
    quickly and the result is accurate to well below 1e-10 across the
    parameter ranges the t and F tails use.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError("a and b must be positive")
    if x < 0.0 or x > 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_frac(a, b, x) / a
    return 1.0 - front * _beta_cont_frac(b, a, 1.0 - x) / b


def t_tail(t: float, df: float) -> float:
    """Two-sided tail probability P(|T| >= |t|) for Student's t.

    Evaluated as I_x(df/2, 1/2) with x = df / (df + t^2).
    """
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def _f_tail(f: float, df1: float, df2: float) -> float:
    """Upper tail P(F >= f) for the F distribution."""
    if df1 <= 0 or df2 <= 0:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0.0:
        return 1.0
    if math.isinf(f):
        return 0.0
    x = df2 / (df2 + df1 * f)
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x)


_CORRELATION_BANDS = (
    (0.1, "negligible"),
    (0.4, "weak"),
    (0.7, "moderate"),
    (0.9, "strong"),
)


def correlation_band(rho: float) -> str:
    """Qualitative strength label for a correlation, judged on |rho|.

    Below 0.1 negligible, then weak, moderate, strong, and very strong
    from 0.9 upward.  Band edges belong to the higher band.
    """
    r = abs(rho)
    if r > 1.0 + 1e-9:
        raise ValueError("correlation outside [-1, 1]")
    for edge, label in _CORRELATION_BANDS:
        if r < edge:
            return label
    return "very strong"


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n where tied values share the average of their positions."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    sorted_vals = values[order]
    n = len(values)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


@dataclass
class CorrelationResult:
    """Spearman correlation outcome; ``rho`` is None when undefined."""

    rho: float | None
    n: int
    band: str | None
    undefined_reason: str | None = None

    @property
    def defined(self) -> bool:
        return self.rho is not None


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Spearman rank correlation with average ranks for ties.

    A constant input vector leaves the coefficient undefined; the result
    then carries a reason instead of a value.
    """
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.ndim != 1 or yv.ndim != 1 or len(xv) != len(yv):
        raise ValueError("x and y must be one-dimensional and equally long")
    n = len(xv)
    if n < 2:
        raise ValueError("need at least two paired observations")
    if np.ptp(xv) == 0.0:
        return CorrelationResult(None, n, None, "x is constant")
    if np.ptp(yv) == 0.0:
        return CorrelationResult(None, n, None, "y is constant")
    rx = _average_ranks(xv)
    ry = _average_ranks(yv)
    rx -= rx.mean()
    ry -= ry.mean()
    rho = float(rx @ ry) / math.sqrt(float(rx @ rx) * float(ry @ ry))
    rho = max(-1.0, min(1.0, rho))
    return CorrelationResult(rho, n, correlation_band(rho))


@dataclass
class RegressionResult:
    """OLS fit summary.  Per-predictor vectors exclude the intercept."""

    coefficients: tuple[float, ...]
    intercept: float
    std_errors: tuple[float, ...]
    intercept_std_error: float
    t_values: tuple[float, ...]
    p_values: tuple[float, ...]
    intercept_p_value: float
    r_squared: float
    adjusted_r_squared: float
    n: int
    k: int


def _dependent_columns(design: np.ndarray, rtol: float = 1e-10) -> list[int]:
    """Indices of design columns linearly dependent on earlier columns.

    Walks the columns left to right comparing prefix ranks (singular
    values below rtol times the largest are treated as zero), so the
    first occurrence of each direction is kept and later duplicates are
    the ones reported.
    """
    dependent = []
    rank = 0
    for j in range(design.shape[1]):
        s = np.linalg.svd(design[:, : j + 1], compute_uv=False)
        new_rank = int(np.sum(s > rtol * s[0])) if s[0] > 0.0 else 0
        if new_rank == rank:
            dependent.append(j)
        else:
            rank = new_rank
    return dependent


def ols(
    X: Sequence[Sequence[float]],
    y: Sequence[float],
    column_names: Sequence[str] | None = None,
) -> RegressionResult:
    """Ordinary least squares with an implicit intercept.

    Fits y = b0 + X @ b through a QR decomposition of the design matrix
    and reports two-sided t-test p-values per coefficient.  The design
    is required to have full column rank (relative tolerance 1e-10);
    dependent columns raise RankDeficiencyError naming them instead of
    being dropped silently.
    """
    Xm = np.asarray(X, dtype=float)
    yv = np.asarray(y, dtype=float)
    if Xm.ndim == 1:
        Xm = Xm.reshape(-1, 1)
    if Xm.ndim != 2 or yv.ndim != 1 or Xm.shape[0] != len(yv):
        raise ValueError("X must be n x k with y of length n")
    n, k = Xm.shape
    if column_names is not None and len(column_names) != k:
        raise ValueError("column_names length must match the number of predictors")
    if n < k + 2:
        raise ValueError(
            f"need more observations than predictors plus intercept (n={n}, k={k})"
        )
    design = np.column_stack([np.ones(n), Xm])
    dependent = _dependent_columns(design)
    if dependent:
        labels = ["intercept"] + (
            list(column_names) if column_names is not None else [f"x{j}" for j in range(k)]
        )
        raise RankDeficiencyError([labels[j] for j in dependent])
    q, r = np.linalg.qr(design)
    beta = np.linalg.solve(r, q.T @ yv)
    resid = yv - design @ beta
    ssr = float(resid @ resid)
    sst = float(np.sum((yv - yv.mean()) ** 2))
    if sst == 0.0:
        raise ValueError("response has zero variance")
    dof = n - k - 1
    sigma2 = ssr / dof
    r_inv = np.linalg.solve(r, np.eye(k + 1))
    cov = sigma2 * (r_inv @ r_inv.T)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    t_vals = np.empty(k + 1)
    p_vals = np.empty(k + 1)
    for j in range(k + 1):
        if se[j] == 0.0:
            t_vals[j] = math.copysign(math.inf, beta[j]) if beta[j] != 0.0 else 0.0
            p_vals[j] = 0.0 if beta[j] != 0.0 else 1.0
        else:
            t_vals[j] = beta[j] / se[j]
            p_vals[j] = t_tail(float(t_vals[j]), dof)
    r2 = min(1.0, max(0.0, 1.0 - ssr / sst))
    adjusted = 1.0 - (1.0 - r2) * (n - 1) / dof
    return RegressionResult(
        coefficients=tuple(float(b) for b in beta[1:]),
        intercept=float(beta[0]),
        std_errors=tuple(float(s) for s in se[1:]),
        intercept_std_error=float(se[0]),
        t_values=tuple(float(t) for t in t_vals[1:]),
        p_values=tuple(float(p) for p in p_vals[1:]),
        intercept_p_value=float(p_vals[0]),
        r_squared=r2,
        adjusted_r_squared=float(adjusted),
        n=n,
        k=k,
    )


@dataclass
class AnovaResult:
    """One-way ANOVA outcome with a note set on degenerate inputs."""

    f_statistic: float
    p_value: float
    df_between: int
    df_within: int
    group_means: tuple[float, ...]
    group_sizes: tuple[int, ...]
    degenerate: str | None = None


def one_way_anova(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way fixed-effects ANOVA over two or more groups.

    Zero within-group variance is flagged rather than raised: with a
    between-group difference the F statistic is infinite (p = 0), and
    with all values identical the test carries no information (F = 0,
    p = 1, degenerate note set).
    """
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise ValueError("need at least two groups")
    if any(len(g) < 2 for g in arrays):
        raise ValueError("every group needs at least two values")
    sizes = [len(g) for g in arrays]
    means = [float(g.mean()) for g in arrays]
    grand = float(np.concatenate(arrays).mean())
    ss_between = sum(m * (mu - grand) ** 2 for m, mu in zip(sizes, means))
    ss_within = sum(float(np.sum((g - mu) ** 2)) for g, mu in zip(arrays, means))
    df_between = len(arrays) - 1
    df_within = sum(sizes) - len(arrays)
    if ss_within == 0.0:
        if ss_between == 0.0:
            return AnovaResult(
                0.0, 1.0, df_between, df_within, tuple(means), tuple(sizes),
                degenerate="no variation in any group",
            )
        return AnovaResult(
            math.inf, 0.0, df_between, df_within, tuple(means), tuple(sizes),
            degenerate="zero within-group variance",
        )
    f = (ss_between / df_between) / (ss_within / df_within)
    return AnovaResult(
        float(f), _f_tail(f, df_between, df_within),
        df_between, df_within, tuple(means), tuple(sizes),
    )


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _normal_quantile(p: float) -> float:
    """Inverse standard normal CDF by bisection (search seed only)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _t_critical(alpha: float, df: int) -> float:
    """Positive t whose two-sided tail probability equals alpha."""
    hi = 1.0
    while t_tail(hi, df) > alpha:
        hi *= 2.0
        if hi > 1e8:
            raise ArithmeticError("t critical value search failed")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if t_tail(mid, df) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_GAUSS_NODES = 400
_gauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _gauss_cache:
        _gauss_cache[n] = np.polynomial.legendre.leggauss(n)
    return _gauss_cache[n]


def _noncentral_t_both_tails(tcrit: float, df: int, ncp: float) -> float:
    """P(T > tcrit) + P(T < -tcrit) for noncentral t, df >= 2.

    T = (Z + ncp) / sqrt(V / df) with V ~ chi-square(df), so conditioning
    on V gives P(T > t | V=v) = Phi(ncp - t sqrt(v/df)) and the two-tail
    mass is a smooth one-dimensional integral over the chi-square
    density, evaluated here by Gauss-Legendre quadrature over the region
    where that density is non-negligible.
    """
    nodes, weights = _gauss_legendre(_GAUSS_NODES)
    spread = math.sqrt(2.0 * df)
    lo = max(0.0, df - 14.0 * spread - 40.0)
    hi = df + 14.0 * spread + 40.0
    v = 0.5 * (hi - lo) * (nodes + 1.0) + lo
    w = 0.5 * (hi - lo) * weights
    log_pdf = (
        (0.5 * df - 1.0) * np.log(v)
        - 0.5 * v
        - math.lgamma(0.5 * df)
        - 0.5 * df * math.log(2.0)
    )
    scale = np.sqrt(v / df)
    total = 0.0
    for wi, lp, sc in zip(w, log_pdf, scale):
        tails = _normal_cdf(ncp - tcrit * sc) + _normal_cdf(-ncp - tcrit * sc)
        total += wi * math.exp(lp) * tails
    return total


def two_sample_power(n_per_group: int, cohens_d: float, alpha: float) -> float:
    """Exact power of the two-sided two-sample t-test at equal group sizes."""
    if n_per_group < 2:
        raise ValueError("need at least two observations per group")
    df = 2 * n_per_group - 2
    ncp = cohens_d * math.sqrt(n_per_group / 2.0)
    tcrit = _t_critical(alpha, df)
    return _noncentral_t_both_tails(tcrit, df, ncp)


def min_sample_size(alpha: float, power: float, cohens_d: float) -> int:
    """Smallest per-group n reaching the target power, two-sample t-test.

    Starts just below the normal-approximation estimate (which slightly
    undershoots the exact t-based requirement) and walks upward, judging
    each candidate with the exact noncentral-t power.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0.0 < power < 1.0:
        raise ValueError("power must lie in (0, 1)")
    if cohens_d <= 0.0:
        raise ValueError("cohens_d must be positive")
    z_alpha = _normal_quantile(1.0 - alpha / 2.0)
    z_power = _normal_quantile(power)
    approx = 2.0 * ((z_alpha + z_power) / cohens_d) ** 2
    n = max(2, int(math.floor(approx)) - 2)
    while two_sample_power(n, cohens_d, alpha) < power:
        n += 1
        if n > 10_000_000:
            raise ArithmeticError("sample size search did not converge")
    return n
