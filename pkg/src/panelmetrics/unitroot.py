"""Single-series and panel unit-root tests.

Single series: augmented Dickey-Fuller (tau with response-surface p-values)
and Phillips-Perron (Bartlett long-run variance correction of the
unaugmented tau).  Panel: the pooled-t test with bias adjustments, the
standardized mean-t test, and Fisher combination of per-entity p-values,
plus a battery runner that applies all of them to levels and first
differences of each variable.

Every series handed to a test must be an unbroken calendar run; the battery
extracts each entity's longest contiguous stretch and drops entities that
fail a test's length precondition, with a warning naming them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats as _st

from . import _dfconstants as _dfc
from ._ipsmoments import IPS_MOMENTS, IPS_T_GRID
from .data import PanelDataset, PanelWarning, VariableSeries, contiguous_run, first_difference

P_FLOOR = 1e-16  # combination floor; keeps log(p) finite

DET_TERMS = {"n": 0, "c": 1, "ct": 2}  # deterministic columns per case


@dataclass(frozen=True)
class UnitRootResult:
    """Outcome of one unit-root test on one series or panel."""

    test: str
    statistic: float
    p_value: float
    det: str
    lags: int | None
    n_obs: int
    bandwidth: int | None = None
    n_entities: int | None = None
    df: int | None = None
    per_entity: tuple = ()


@dataclass(frozen=True)
class BatteryCell:
    """One (variable, order, test) slot: a result or an error marker."""

    variable: str
    order: str
    test: str
    result: UnitRootResult | None
    error: str | None = None


@dataclass(frozen=True)
class BatteryResult:
    variables: tuple
    orders: tuple
    tests: tuple
    cells: dict

    def cell(self, variable: str, order: str, test: str) -> BatteryCell:
        return self.cells[(variable, order, test)]


def default_lags(n_obs: int) -> int:
    """Schwert-style lag rule, floor(4 * (T/100)^(2/9))."""
    if n_obs < 1:
        raise ValueError("default_lags needs a positive length")
    return int(np.floor(4.0 * (n_obs / 100.0) ** (2.0 / 9.0)))


def _check_series(y) -> np.ndarray:
    y = np.ravel(np.asarray(y, dtype=float))
    if not np.all(np.isfinite(y)):
        raise ValueError("unit-root tests need a contiguous series with no missing values")
    return y


def _max_feasible_lags(T: int, det: str, min_df: int = 2) -> int:
    # regression rows = T - 1 - p, parameters = p + 1 + det terms
    return (T - 1 - min_df - DET_TERMS[det] - 1) // 2


def _df_regression(y: np.ndarray, det: str, lags: int):
    """Dickey-Fuller regression pieces shared by the tau-based tests.

    Returns (tau, rho_hat, se_rho, s, residuals, n_rows).
    """
    T = y.shape[0]
    dy = np.diff(y)
    rows = T - 1 - lags
    cols = [y[lags:-1]]
    for j in range(1, lags + 1):
        cols.append(dy[lags - j : T - 1 - j])
    if det in ("c", "ct"):
        cols.append(np.ones(rows))
    if det == "ct":
        cols.append(np.arange(rows, dtype=float))
    X = np.column_stack(cols)
    yy = dy[lags:]
    k = X.shape[1]
    XtX = X.T @ X
    beta = np.linalg.solve(XtX, X.T @ yy)
    resid = yy - X @ beta
    df = rows - k
    s2 = float(resid @ resid) / df
    se = np.sqrt(s2 * np.linalg.inv(XtX)[0, 0])
    tau = float(beta[0] / se)
    return tau, float(beta[0]), float(se), float(np.sqrt(s2)), resid, rows


def adf_test(y, det: str = "c", lags: int | None = None) -> UnitRootResult:
    """Augmented Dickey-Fuller test.

    Parameters
    ----------
    y : array_like
        Contiguous series in levels (or differences, caller's choice).
    det : {"n", "c", "ct"}
        Deterministic terms: none, intercept, intercept and trend.
    lags : int, optional
        Augmentation lags.  Default applies the T-based rule, capped so the
        regression keeps at least two residual degrees of freedom.

    Returns
    -------
    UnitRootResult
        statistic is the tau on the lagged level; p-value from the
        response-surface approximation.
    """
    y = _check_series(y)
    if det not in DET_TERMS:
        raise ValueError(f"unknown deterministic case {det!r}")
    T = y.shape[0]
    cap = _max_feasible_lags(T, det)
    if lags is None:
        if cap < 0:
            raise ValueError(f"adf_test: series too short (T={T}) for det={det!r}")
        lags = min(default_lags(T), cap)
    else:
        lags = int(lags)
        if lags < 0:
            raise ValueError("lags must be nonnegative")
        if lags > cap:
            raise ValueError(
                f"adf_test: T={T} cannot support {lags} lags with det={det!r} "
                f"(maximum {max(cap, 0)})"
            )
    tau, _, _, _, _, rows = _df_regression(y, det, lags)
    return UnitRootResult(
        test="adf",
        statistic=tau,
        p_value=_dfc.mackinnon_p(tau, det),
        det=det,
        lags=lags,
        n_obs=rows,
    )


def _bartlett_lrv(u: np.ndarray, bandwidth: int) -> float:
    """Univariate Bartlett long-run variance with divisor T."""
    T = u.shape[0]
    gamma0 = float(u @ u) / T
    out = gamma0
    for j in range(1, bandwidth + 1):
        w = 1.0 - j / (bandwidth + 1.0)
        out += 2.0 * w * float(u[j:] @ u[:-j]) / T
    return out


def neweywest_bandwidth(u: np.ndarray) -> int:
    """Automatic Bartlett bandwidth (plug-in form).

    Uses n = floor(4 (T/100)^(2/9)) autocovariances in the pilot step and
    returns floor(1.1447 ((s1/s0)^2 T)^(1/3)) clamped to [0, T-2].
    """
    u = np.ravel(np.asarray(u, dtype=float))
    if u.ndim != 1 or u.shape[0] < 4:
        raise ValueError("neweywest_bandwidth needs a vector of length >= 4")
    T = u.shape[0]
    n = default_lags(T)
    n = min(n, T - 2)
    sig = [float(u @ u) / T]
    for j in range(1, n + 1):
        sig.append(float(u[j:] @ u[:-j]) / T)
    s0 = sig[0] + 2.0 * sum(sig[1:])
    s1 = 2.0 * sum(j * sig[j] for j in range(1, n + 1))
    if s0 <= 0:
        return 0
    m = int(np.floor(1.1447 * ((s1 / s0) ** 2 * T) ** (1.0 / 3.0)))
    return int(np.clip(m, 0, T - 2))


def pp_test(y, det: str = "c", bandwidth: int | None = None) -> UnitRootResult:
    """Phillips-Perron Z-tau test.

    The statistic corrects the unaugmented Dickey-Fuller tau with the
    Bartlett long-run variance f0 of its residuals:

        Z = tau * sqrt(g0/f0) - T (f0 - g0) se(rho) / (2 sqrt(f0) s)

    where g0 is the residual variance with divisor T.  At bandwidth 0,
    f0 == g0 and Z reduces to tau exactly.  bandwidth=None applies the
    automatic rule to the residuals.
    """
    y = _check_series(y)
    if det not in DET_TERMS:
        raise ValueError(f"unknown deterministic case {det!r}")
    T = y.shape[0]
    if _max_feasible_lags(T, det) < 0:
        raise ValueError(f"pp_test: series too short (T={T}) for det={det!r}")
    tau, _, se_rho, s, resid, rows = _df_regression(y, det, 0)
    if bandwidth is None:
        bandwidth = neweywest_bandwidth(resid)
    else:
        bandwidth = int(bandwidth)
        if bandwidth < 0:
            raise ValueError("bandwidth must be nonnegative")
        if bandwidth > rows - 2:
            raise ValueError(f"pp_test: bandwidth {bandwidth} too large for {rows} rows")
    gamma0 = float(resid @ resid) / rows
    f0 = _bartlett_lrv(resid, bandwidth)
    if f0 <= 0:
        raise ValueError("pp_test: nonpositive long-run variance")
    z = tau * np.sqrt(gamma0 / f0) - rows * (f0 - gamma0) * se_rho / (2.0 * np.sqrt(f0) * s)
    return UnitRootResult(
        test="pp",
        statistic=float(z),
        p_value=_dfc.mackinnon_p(float(z), det),
        det=det,
        lags=0,
        n_obs=rows,
        bandwidth=bandwidth,
    )


def fisher_combine(p_values, df_scale: int = 2) -> tuple:
    """Combine independent p-values: chi2 = -2 sum log p, df = 2N.

    p-values are floored at P_FLOOR so a hard zero cannot produce an
    infinite statistic.  Returns (statistic, df, p).
    """
    p = np.ravel(np.asarray(p_values, dtype=float))
    if p.size == 0:
        raise ValueError("fisher_combine needs at least one p-value")
    if np.any(~np.isfinite(p)) or np.any(p > 1):
        raise ValueError("p-values must be finite and at most 1")
    if np.any(p <= 0):
        warnings.warn(
            f"fisher_combine: p-value(s) at or below zero clamped to {P_FLOOR:g}",
            PanelWarning,
            stacklevel=2,
        )
    stat = -2.0 * float(np.log(np.clip(p, P_FLOOR, 1.0)).sum())
    df = df_scale * p.size
    return stat, df, float(_st.chi2.sf(stat, df))


def _panel_runs(series: VariableSeries, min_len: int, what: str):
    """Longest contiguous run per entity, dropping short entities with one warning."""
    runs, kept, dropped = [], [], []
    for i, entity in enumerate(series.entities):
        run = contiguous_run(series.values[i], series.periods)
        if run.shape[0] >= min_len:
            runs.append(run)
            kept.append(entity)
        else:
            dropped.append(entity)
    if dropped:
        warnings.warn(
            f"{what}({series.name}): dropped {len(dropped)} entity(ies) below "
            f"{min_len} contiguous observations: {', '.join(map(str, dropped[:8]))}"
            + ("..." if len(dropped) > 8 else ""),
            PanelWarning,
            stacklevel=3,
        )
    if len(kept) < 2:
        raise ValueError(f"{what}({series.name}): fewer than two usable entities")
    return runs, tuple(kept)


def _entity_lags(T: int, det: str, lags: int | None, min_df: int = 2) -> int:
    cap = _max_feasible_lags(T, det, min_df=min_df)
    p = default_lags(T) if lags is None else int(lags)
    return max(0, min(p, cap))


def fisher_adf(series: VariableSeries, det: str = "c", lags: int | None = None) -> UnitRootResult:
    """Fisher combination of per-entity ADF p-values."""
    min_len = 2 * 0 + DET_TERMS[det] + 1 + 3  # at least a lag-0 regression
    runs, kept = _panel_runs(series, min_len, "fisher_adf")
    stats_pe = []
    for entity, run in zip(kept, runs):
        p_i = _entity_lags(run.shape[0], det, lags)
        r = adf_test(run, det=det, lags=p_i)
        stats_pe.append((entity, r.statistic, r.p_value, r.lags))
    stat, df, p = fisher_combine([row[2] for row in stats_pe])
    return UnitRootResult(
        test="fisher-adf", statistic=stat, p_value=p, det=det,
        lags=None, n_obs=sum(r.shape[0] for r in runs),
        n_entities=len(kept), df=df, per_entity=tuple(stats_pe),
    )


def fisher_pp(series: VariableSeries, det: str = "c", bandwidth: int | None = None) -> UnitRootResult:
    """Fisher combination of per-entity Phillips-Perron p-values."""
    min_len = DET_TERMS[det] + 1 + 3
    runs, kept = _panel_runs(series, min_len, "fisher_pp")
    stats_pe = []
    for entity, run in zip(kept, runs):
        r = pp_test(run, det=det, bandwidth=bandwidth)
        stats_pe.append((entity, r.statistic, r.p_value, r.bandwidth))
    stat, df, p = fisher_combine([row[2] for row in stats_pe])
    return UnitRootResult(
        test="fisher-pp", statistic=stat, p_value=p, det=det,
        lags=None, n_obs=sum(r.shape[0] for r in runs),
        n_entities=len(kept), df=df, per_entity=tuple(stats_pe),
    )


def _ips_moments(T: int, p: int, det: str) -> tuple:
    """(mean, variance, usable lag) of the null t-statistic, interpolated in T."""
    table = IPS_MOMENTS[det]
    grid = IPS_T_GRID
    if T < grid[0]:
        raise ValueError(f"ips_test: effective length {T} below moment table minimum {grid[0]}")
    if T > grid[-1]:
        warnings.warn(
            f"ips_test: length {T} above moment table maximum {grid[-1]}; clamped",
            PanelWarning,
            stacklevel=3,
        )
        T = grid[-1]
    hi = 0
    while grid[hi] < T:
        hi += 1
    lo = hi if grid[hi] == T else hi - 1
    pmax_avail = min(
        max(pp for (tt, pp) in table if tt == grid[lo]),
        max(pp for (tt, pp) in table if tt == grid[hi]),
    )
    p_eff = min(p, pmax_avail)
    m_lo, v_lo = table[(grid[lo], p_eff)]
    m_hi, v_hi = table[(grid[hi], p_eff)]
    if grid[hi] == grid[lo]:
        return m_lo, v_lo, p_eff
    w = (T - grid[lo]) / (grid[hi] - grid[lo])
    return m_lo + w * (m_hi - m_lo), v_lo + w * (v_hi - v_lo), p_eff


def ips_test(series: VariableSeries, det: str = "c", lags: int | None = None) -> UnitRootResult:
    """Standardized mean of per-entity Dickey-Fuller t-statistics.

    W = sqrt(N) (tbar - mean of tabulated means) / sqrt(mean of tabulated
    variances), asymptotically standard normal; p is the lower tail.  The
    moment table covers intercept and trend cases; per-entity lags are
    capped so each regression keeps the residual df the table assumes.
    """
    if det not in ("c", "ct"):
        raise ValueError("ips_test supports det 'c' or 'ct' (moment table coverage)")
    min_len = IPS_T_GRID[0]
    runs, kept = _panel_runs(series, min_len, "ips_test")
    stats_pe, means, variances = [], [], []
    for entity, run in zip(kept, runs):
        T = run.shape[0]
        p_i = _entity_lags(T, det, lags, min_df=3)
        r = adf_test(run, det=det, lags=p_i)
        m, v, p_used = _ips_moments(T, p_i, det)
        if p_used != p_i:  # moment table forced a shorter augmentation
            r = adf_test(run, det=det, lags=p_used)
        stats_pe.append((entity, r.statistic, r.p_value, p_used))
        means.append(m)
        variances.append(v)
    N = len(kept)
    tbar = float(np.mean([row[1] for row in stats_pe]))
    W = np.sqrt(N) * (tbar - float(np.mean(means))) / np.sqrt(float(np.mean(variances)))
    return UnitRootResult(
        test="ips", statistic=float(W), p_value=float(_st.norm.cdf(W)), det=det,
        lags=None, n_obs=sum(r.shape[0] for r in runs),
        n_entities=N, per_entity=tuple(stats_pe),
    )


def llc_test(series: VariableSeries, det: str = "c", lags: int | None = None) -> UnitRootResult:
    """Pooled panel unit-root t-test with finite-sample bias adjustments.

    Per entity, the differenced series and the lagged level are each
    orthogonalized against augmentation lags and deterministic terms, scaled
    by the entity's regression standard error, and pooled into one slope.
    The pooled t is then centered and scaled with tabulated adjustments
    indexed by the average effective length; below the table's range the
    test refuses rather than extrapolate.
    """
    if det not in DET_TERMS:
        raise ValueError(f"unknown deterministic case {det!r}")
    min_len = 2 * 0 + DET_TERMS[det] + 1 + 3
    runs, kept = _panel_runs(series, min_len, "llc_test")

    e_all, v_all, s_ratios, t_effs, lags_pe = [], [], [], [], []
    for run in runs:
        T = run.shape[0]
        p_i = _entity_lags(T, det, lags)
        dy = np.diff(run)
        rows = T - 1 - p_i
        # Common right-hand side: augmentation lags plus deterministics.
        cols = []
        for j in range(1, p_i + 1):
            cols.append(dy[p_i - j : T - 1 - j])
        if det in ("c", "ct"):
            cols.append(np.ones(rows))
        if det == "ct":
            cols.append(np.arange(rows, dtype=float))
        target_dy = dy[p_i:]
        target_lev = run[p_i:-1]
        if cols:
            Q = np.column_stack(cols)
            QtQ_inv = np.linalg.pinv(Q.T @ Q)
            e_i = target_dy - Q @ (QtQ_inv @ (Q.T @ target_dy))
            v_i = target_lev - Q @ (QtQ_inv @ (Q.T @ target_lev))
        else:
            e_i, v_i = target_dy.copy(), target_lev.copy()
        # Entity scale: regression error from e on v.
        denom = float(v_i @ v_i)
        delta_i = float(e_i @ v_i) / denom if denom > 0 else 0.0
        resid_i = e_i - delta_i * v_i
        s2_i = float(resid_i @ resid_i) / rows
        if s2_i <= 0:
            raise ValueError(f"llc_test({series.name}): degenerate entity regression")
        e_all.append(e_i / np.sqrt(s2_i))
        v_all.append(v_i / np.sqrt(s2_i))
        # Long-run over innovation standard deviation of the differences.
        # The no-trend models have mean-zero differences under their nulls,
        # so raw autocovariances apply; demeaning there biases the kernel
        # estimate down by about (K+1)/T and oversizes the test.  The trend
        # model's null leaves a per-entity drift to remove first.
        d_adj = dy - dy.mean() if det == "ct" else dy
        K = min(int(np.floor(3.21 * d_adj.shape[0] ** (1.0 / 3.0))), d_adj.shape[0] - 2)
        lrv = _bartlett_lrv(d_adj, max(K, 0))
        s_ratios.append(np.sqrt(max(lrv, 1e-300) / s2_i))
        t_effs.append(rows)
        lags_pe.append(p_i)

    N = len(runs)
    e = np.concatenate(e_all)
    v = np.concatenate(v_all)
    denom = float(v @ v)
    delta = float(e @ v) / denom
    resid = e - delta * v
    n_total = e.shape[0]
    sigma2_eps = float(resid @ resid) / n_total
    std_delta = np.sqrt(sigma2_eps / denom)
    t_delta = delta / std_delta

    t_tilde = float(np.mean(t_effs))
    mu_star, sigma_star = _dfc.llc_adjustment(t_tilde, det)
    s_bar = float(np.mean(s_ratios))
    adj = N * t_tilde * s_bar * std_delta / sigma2_eps * mu_star
    t_star = (t_delta - adj) / sigma_star
    return UnitRootResult(
        test="llc", statistic=float(t_star), p_value=float(_st.norm.cdf(t_star)),
        det=det, lags=None, n_obs=n_total, n_entities=N,
        per_entity=tuple(zip(kept, [float("nan")] * N, [float("nan")] * N, lags_pe)),
    )


BATTERY_TESTS = ("fisher-pp", "fisher-adf", "ips", "llc")
BATTERY_ORDERS = ("level", "difference")


def run_battery(dataset: PanelDataset, variables=None, det: str = "c",
                lags: int | None = None, bandwidth: int | None = None) -> BatteryResult:
    """All four panel tests on levels and first differences of each variable.

    Any test that fails its preconditions contributes an error-marker cell
    (reason preserved) instead of aborting the battery.
    """
    names = tuple(variables) if variables is not None else tuple(dataset.variables)
    cells = {}
    for name in names:
        level = dataset[name]
        diff = first_difference(level)
        for order, series in (("level", level), ("difference", diff)):
            for test in BATTERY_TESTS:
                try:
                    if test == "fisher-pp":
                        res = fisher_pp(series, det=det, bandwidth=bandwidth)
                    elif test == "fisher-adf":
                        res = fisher_adf(series, det=det, lags=lags)
                    elif test == "ips":
                        res = ips_test(series, det=det, lags=lags)
                    else:
                        res = llc_test(series, det=det, lags=lags)
                    cells[(name, order, test)] = BatteryCell(name, order, test, res)
                except ValueError as exc:
                    cells[(name, order, test)] = BatteryCell(name, order, test, None, str(exc))
    return BatteryResult(variables=names, orders=BATTERY_ORDERS, tests=BATTERY_TESTS, cells=cells)
