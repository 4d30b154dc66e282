"""Pooled OLS, fixed-effects panels, semi-partial R2, and Clarke tests.

Design follows the tables this engine reproduces: classical homoskedastic
standard errors, F statistics against the intercept-only model with
df = (k, n-k-1), listwise deletion per specification, and per-observation
Gaussian log-likelihoods (MLE variance SSR/n) retained on every fit so any
two fits on the same sample can be compared with the Clarke sign test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import NoWithinVariationError, RankDeficientError, ValidationError

GOVERNANCE_COLUMNS = (
    "rule_of_law",
    "corruption_control",
    "government_effectiveness",
    "political_stability",
    "regulatory_quality",
    "voice_accountability",
)

# Named regressor blocks usable in model specs and block-wise removal.
BLOCKS: dict[str, tuple[str, ...]] = {"governance": GOVERNANCE_COLUMNS}


@dataclass
class ModelSpec:
    dependent: str
    regressors: tuple[str, ...]

    @property
    def formula(self) -> str:
        return f"{self.dependent} ~ {' + '.join(self.regressors)}"


def parse_spec(text: str) -> ModelSpec:
    """Parse `y ~ x1 + x2 + block` into a dependent and expanded regressors."""
    if "~" not in text:
        raise ValidationError(f"model spec needs a '~': {text!r}")
    lhs, rhs = text.split("~", 1)
    dependent = lhs.strip()
    if not dependent:
        raise ValidationError(f"model spec has no dependent variable: {text!r}")
    regressors: list[str] = []
    for term in rhs.split("+"):
        term = term.strip()
        if not term:
            raise ValidationError(f"empty term in model spec: {text!r}")
        for col in BLOCKS.get(term, (term,)):
            if col not in regressors:
                regressors.append(col)
    return ModelSpec(dependent, tuple(regressors))


class PanelDataset:
    """(country, period) observations with named numeric columns.

    Missing values are NaN. Rows missing the dependent variable are dropped
    at construction, so every stored row can enter a regression sample.
    """

    def __init__(
        self,
        rows: Sequence[tuple[str, str]],
        columns: Mapping[str, Sequence[float]],
        dependent: str,
    ):
        if dependent not in columns:
            raise ValidationError(f"dependent column {dependent!r} missing")
        cols = {k: np.asarray(v, dtype=float) for k, v in columns.items()}
        n = len(rows)
        for name, arr in cols.items():
            if arr.shape != (n,):
                raise ValidationError(f"column {name!r} has wrong length")
        keep = ~np.isnan(cols[dependent])
        self.rows: tuple[tuple[str, str], ...] = tuple(
            r for r, k in zip(rows, keep) if k
        )
        self.columns: dict[str, np.ndarray] = {
            k: v[keep] for k, v in cols.items()
        }
        self.dependent = dependent
        self._check_gdp_square()

    def _check_gdp_square(self) -> None:
        if "ln_gdp" in self.columns and "ln_gdp_sq" in self.columns:
            a = self.columns["ln_gdp"]
            b = self.columns["ln_gdp_sq"]
            both = ~np.isnan(a) & ~np.isnan(b)
            if both.any() and np.abs(a[both] ** 2 - b[both]).max() > 1e-12:
                raise ValidationError("ln_gdp_sq must equal ln_gdp squared")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def countries(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(c for c, _ in self.rows))

    def complete_rows(self, regressors: Sequence[str]) -> np.ndarray:
        """Boolean mask of rows with every regressor present."""
        mask = np.ones(len(self.rows), dtype=bool)
        for name in regressors:
            if name not in self.columns:
                raise ValidationError(f"unknown column {name!r}")
            mask &= ~np.isnan(self.columns[name])
        return mask


@dataclass
class FitResult:
    dependent: str
    regressors: tuple[str, ...]
    coefficients: dict[str, float]  # regressors plus "intercept" when present
    standard_errors: dict[str, float]
    p_values: dict[str, float]
    r2: float
    adjusted_r2: float
    f_statistic: float
    f_df: tuple[int, int]
    residual_std_error: float
    n_observations: int
    n_params: int  # parameters charged against the sample (Clarke/Schwarz k)
    loglik_per_obs: np.ndarray
    obs: tuple[tuple[str, str], ...]
    fixed_effects: bool = False
    orthogonality: float = 0.0  # max |X'e|, diagnostics

    def to_dict(self) -> dict:
        def finite(v: float) -> float | None:
            return v if math.isfinite(v) else None

        return {
            "dependent": self.dependent,
            "regressors": list(self.regressors),
            "coefficients": self.coefficients,
            "standard_errors": self.standard_errors,
            "p_values": self.p_values,
            "r2": self.r2,
            "adjusted_r2": self.adjusted_r2,
            "f_statistic": finite(self.f_statistic),
            "f_df": list(self.f_df),
            "residual_std_error": self.residual_std_error,
            "n_observations": self.n_observations,
            "fixed_effects": self.fixed_effects,
        }


def _collinear_columns(x: np.ndarray, names: Sequence[str]) -> list[str]:
    """Columns expressible (to working precision) from the other columns."""
    bad = []
    for j in range(x.shape[1]):
        others = np.delete(x, j, axis=1)
        if others.shape[1] == 0:
            continue
        coef, *_ = np.linalg.lstsq(others, x[:, j], rcond=None)
        resid = x[:, j] - others @ coef
        scale = max(1.0, float(np.abs(x[:, j]).max()))
        if np.abs(resid).max() < 1e-8 * scale:
            bad.append(names[j])
    return bad


def _solve_ols(x: np.ndarray, y: np.ndarray, names: Sequence[str]):
    rank = np.linalg.matrix_rank(x)
    if rank < x.shape[1]:
        raise RankDeficientError(
            f"design matrix is rank deficient; collinear columns: "
            f"{_collinear_columns(x, names)}",
            columns=_collinear_columns(x, names),
        )
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ coef
    return coef, resid


def _gaussian_loglik(resid: np.ndarray) -> np.ndarray:
    n = len(resid)
    sigma2 = float(resid @ resid) / n
    if sigma2 == 0.0:
        # Perfect fit: the Gaussian MLE density is unbounded.
        return np.full(n, np.inf)
    return -0.5 * np.log(2 * np.pi * sigma2) - resid**2 / (2 * sigma2)


def ols_fit(data: PanelDataset, spec: Sequence[str]) -> FitResult:
    """Pooled OLS of the dataset's dependent on the given regressors."""
    spec = tuple(spec)
    mask = data.complete_rows(spec)
    y = data.columns[data.dependent][mask]
    n = len(y)
    k = len(spec)
    if n <= k + 1:
        raise ValidationError(f"need more than k+1={k + 1} observations, have {n}")
    x = np.column_stack(
        [np.ones(n)] + [data.columns[name][mask] for name in spec]
    )
    names = ["intercept", *spec]
    coef, resid = _solve_ols(x, y, names)

    ssr = float(resid @ resid)
    sst = float(((y - y.mean()) ** 2).sum())
    df_resid = n - k - 1
    r2 = 1.0 - ssr / sst
    adjusted = 1.0 - (1.0 - r2) * (n - 1) / df_resid
    f_stat = (r2 / k) / ((1.0 - r2) / df_resid) if r2 < 1.0 else float("inf")
    sigma2 = ssr / df_resid
    cov = sigma2 * np.linalg.inv(x.T @ x)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        tvals = np.where(se > 0, coef / np.where(se > 0, se, 1.0), np.inf)
    pvals = 2 * stats.t.sf(np.abs(tvals), df_resid)

    obs = tuple(r for r, keep in zip(data.rows, mask) if keep)
    return FitResult(
        dependent=data.dependent,
        regressors=spec,
        coefficients=dict(zip(names, map(float, coef))),
        standard_errors=dict(zip(names, map(float, se))),
        p_values=dict(zip(names, map(float, pvals))),
        r2=r2,
        adjusted_r2=adjusted,
        f_statistic=float(f_stat),
        f_df=(k, df_resid),
        residual_std_error=math.sqrt(sigma2),
        n_observations=n,
        n_params=k + 1,
        loglik_per_obs=_gaussian_loglik(resid),
        obs=obs,
        orthogonality=float(np.abs(x.T @ resid).max()),
    )


def semi_partial(
    data: PanelDataset, full_spec: Sequence[str], variable: str
) -> float:
    """R2 drop from removing a variable (or a named block) from the full model.

    Both fits run on the full model's estimation sample so the comparison
    is nested rather than confounded by listwise deletion.
    """
    full_spec = tuple(full_spec)
    block = BLOCKS.get(variable, (variable,))
    removed = [v for v in full_spec if v in block]
    if not removed:
        raise ValidationError(f"{variable!r} is not part of the full model")
    reduced = tuple(v for v in full_spec if v not in block)

    mask = data.complete_rows(full_spec)
    sub = PanelDataset(
        [r for r, keep in zip(data.rows, mask) if keep],
        {name: arr[mask] for name, arr in data.columns.items()},
        data.dependent,
    )
    full_fit = ols_fit(sub, full_spec)
    if not reduced:
        return full_fit.r2
    return full_fit.r2 - ols_fit(sub, reduced).r2


def fe_fit(data: PanelDataset, spec: Sequence[str]) -> FitResult:
    """Country fixed effects via the within estimator.

    y and X are demeaned by country on the estimation sample; degrees of
    freedom and sigma^2 deduct one parameter per country, so estimates and
    standard errors match the explicit dummy-variable regression.
    """
    spec = tuple(spec)
    mask = data.complete_rows(spec)
    rows = [r for r, keep in zip(data.rows, mask) if keep]
    y = data.columns[data.dependent][mask]
    x = np.column_stack([data.columns[name][mask] for name in spec])
    n = len(y)
    groups = [c for c, _ in rows]
    uniq = list(dict.fromkeys(groups))
    if not any(groups.count(c) >= 2 for c in uniq):
        raise ValidationError("fixed effects need >= 2 observations for a country")

    gidx = np.array([uniq.index(c) for c in groups])
    n_groups = len(uniq)
    y_dm = y.astype(float).copy()
    x_dm = x.astype(float).copy()
    for g in range(n_groups):
        sel = gidx == g
        y_dm[sel] -= y[sel].mean()
        x_dm[sel] -= x[sel].mean(axis=0)

    for j, name in enumerate(spec):
        scale = max(1.0, float(np.abs(x[:, j]).max()))
        if np.abs(x_dm[:, j]).max() <= 1e-12 * scale:
            raise NoWithinVariationError(
                f"regressor {name!r} has no within-country variation", column=name
            )

    k = len(spec)
    df_resid = n - k - n_groups
    if df_resid <= 0:
        raise ValidationError("not enough observations for fixed effects")
    coef, resid = _solve_ols(x_dm, y_dm, list(spec))

    ssr = float(resid @ resid)
    sst = float((y_dm**2).sum())  # demeaned y sums to zero within groups
    r2 = 1.0 - ssr / sst
    adjusted = 1.0 - (1.0 - r2) * (n - n_groups) / df_resid
    f_stat = (r2 / k) / ((1.0 - r2) / df_resid) if r2 < 1.0 else float("inf")
    sigma2 = ssr / df_resid
    cov = sigma2 * np.linalg.inv(x_dm.T @ x_dm)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        tvals = np.where(se > 0, coef / np.where(se > 0, se, 1.0), np.inf)
    pvals = 2 * stats.t.sf(np.abs(tvals), df_resid)

    return FitResult(
        dependent=data.dependent,
        regressors=spec,
        coefficients=dict(zip(spec, map(float, coef))),
        standard_errors=dict(zip(spec, map(float, se))),
        p_values=dict(zip(spec, map(float, pvals))),
        r2=r2,
        adjusted_r2=adjusted,
        f_statistic=float(f_stat),
        f_df=(k, df_resid),
        residual_std_error=math.sqrt(sigma2),
        n_observations=n,
        n_params=k + n_groups,
        loglik_per_obs=_gaussian_loglik(resid),
        obs=tuple(rows),
        fixed_effects=True,
        orthogonality=float(np.abs(x_dm.T @ resid).max()),
    )


@dataclass
class ClarkeResult:
    b_statistic: int  # observations favoring model 1 (after correction)
    n: int  # effective observations (exact zero differences excluded)
    n_zero: int
    p_value: float
    preferred: str  # "model1" | "model2" | "neither"
    correction: float  # Schwarz penalty per observation, (k1-k2) ln(n)/(2n)

    def to_dict(self) -> dict:
        return {
            "b_statistic": self.b_statistic,
            "n": self.n,
            "n_zero": self.n_zero,
            "p_value": self.p_value,
            "preferred": self.preferred,
            "correction": self.correction,
        }


def binomial_two_sided_p(b: int, n: int) -> float:
    """Exact two-sided sign-test p-value at p = 1/2 (integer arithmetic)."""
    if n == 0:
        return 1.0
    denom = Fraction(2) ** n
    lower = sum(math.comb(n, i) for i in range(0, b + 1))
    upper = sum(math.comb(n, i) for i in range(b, n + 1))
    p = 2 * min(Fraction(lower, 1), Fraction(upper, 1)) / denom
    return float(min(p, Fraction(1)))


def clarke_test(
    fit1: FitResult, fit2: FitResult, schwarz: bool = True, alpha: float = 0.05
) -> ClarkeResult:
    """Distribution-free comparison of two non-nested fits on one sample.

    Each observation votes for the model with the higher per-observation
    log-likelihood, after subtracting the Schwarz penalty
    (k1 - k2) ln(n) / (2n) from every difference. Exactly zero differences
    are excluded from the effective sample.
    """
    if fit1.obs != fit2.obs:
        raise ValidationError(
            "Clarke test requires both models fitted on the identical "
            f"observation set ({fit1.n_observations} vs {fit2.n_observations} rows)"
        )
    n = fit1.n_observations
    correction = (fit1.n_params - fit2.n_params) * math.log(n) / (2 * n) if schwarz else 0.0
    with np.errstate(invalid="ignore"):
        d = fit1.loglik_per_obs - fit2.loglik_per_obs - correction
    d = np.where(np.isnan(d), 0.0, d)  # two perfect fits tie
    nonzero = d != 0.0
    n_eff = int(nonzero.sum())
    b = int((d > 0).sum())
    p = binomial_two_sided_p(b, n_eff)
    if p < alpha and b * 2 > n_eff:
        preferred = "model1"
    elif p < alpha and b * 2 < n_eff:
        preferred = "model2"
    else:
        preferred = "neither"
    return ClarkeResult(
        b_statistic=b,
        n=n_eff,
        n_zero=n - n_eff,
        p_value=p,
        preferred=preferred,
        correction=correction,
    )


def _stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def format_fit_table(fits: Sequence[FitResult], title: str | None = None) -> str:
    """Regression-table text: one column per fit, stars on p-values."""
    fits = list(fits)
    if not fits:
        raise ValidationError("no fits to format")
    rows: list[str] = []
    order: list[str] = []
    for fit in fits:
        for name in (*fit.regressors, "intercept"):
            if name in fit.coefficients and name not in order:
                order.append(name)
    width = max([len(n) for n in order] + [18])
    header = f"Dependent variable: {fits[0].dependent}"
    if title:
        rows.append(title)
    rows.append(header)
    rows.append("-" * (width + 24 * len(fits)))
    colhdr = " " * width + "".join(f"{f'({i + 1})':>24}" for i in range(len(fits)))
    rows.append(colhdr)
    for name in order:
        line = f"{name:<{width}}"
        se_line = " " * width
        for fit in fits:
            if name in fit.coefficients:
                c = fit.coefficients[name]
                s = fit.standard_errors[name]
                p = fit.p_values[name]
                line += f"{c:>20.4f}{_stars(p):<4}"
                se_line += f"{f'({s:.4f})':>20}    "
            else:
                line += " " * 24
                se_line += " " * 24
        rows.append(line)
        rows.append(se_line.rstrip() or se_line)
    rows.append("-" * (width + 24 * len(fits)))
    for label, fmt in (
        ("Observations", lambda f: f"{f.n_observations}"),
        ("R2", lambda f: f"{f.r2:.3f}"),
        ("Adjusted R2", lambda f: f"{f.adjusted_r2:.3f}"),
        ("Residual Std. Error", lambda f: f"{f.residual_std_error:.3f}"),
        (
            "F Statistic",
            lambda f: f"{f.f_statistic:.3f} (df = {f.f_df[0]}; {f.f_df[1]})",
        ),
    ):
        rows.append(
            f"{label:<{width}}" + "".join(f"{fmt(f):>24}" for f in fits)
        )
    if any(f.fixed_effects for f in fits):
        rows.append(
            f"{'Country Fixed Effects':<{width}}"
            + "".join(f"{'Yes' if f.fixed_effects else 'No':>24}" for f in fits)
        )
    rows.append("Note: *p<0.1; **p<0.05; ***p<0.01")
    return "\n".join(rows)
