"""First-difference GMM for dynamic panels.

The levels equation with entity effects is differenced to remove the
effects; the differenced lagged dependent is instrumented with earlier
levels of the dependent (optionally depth-limited or collapsed), while
differenced exogenous regressors instrument themselves.  One-step weighting
uses the tridiagonal second-difference form implied by iid level errors;
two-step reweights with the clustered outer product of one-step moments.
Overidentification is summarized by the J statistic at the two-step
weighting, which equals the minimized criterion by construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as _st

from .data import ModelSpec, PanelDataset, PanelWarning, regression_sample


@dataclass(frozen=True)
class DiffSample:
    """Per-entity differenced equation rows.

    blocks hold (entity, years, dy, dX); a year is usable when the level
    equation is complete at it and at the preceding year.
    """

    columns: tuple
    blocks: tuple
    spec: ModelSpec

    @property
    def n_obs(self) -> int:
        return sum(b[2].shape[0] for b in self.blocks)

    @property
    def n_entities(self) -> int:
        return len(self.blocks)

    @property
    def periods_included(self) -> int:
        years = np.concatenate([b[1] for b in self.blocks])
        return int(np.unique(years).size)


@dataclass(frozen=True)
class InstrumentMatrix:
    """Instrument blocks aligned with a DiffSample.

    columns are labels; uncollapsed level instruments are keyed by
    (equation year, source year), collapsed ones by lag distance.  Cells
    with no usable level are zero.  Columns that would be entirely zero
    are dropped (recorded in dropped_columns).
    """

    columns: tuple
    blocks: tuple  # (entity, years, Z_i) aligned with the sample blocks
    collapse: bool
    max_depth: int | None
    dropped_columns: tuple = ()

    @property
    def n_instruments(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class GmmResult:
    """Dynamic panel GMM estimates."""

    method: str
    step: str
    columns: tuple
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    cov: np.ndarray
    n_obs: int
    n_entities: int
    periods_included: int
    instrument_count: int
    j_stat: float
    j_df: int
    j_p: float | None
    one_step_coefficients: np.ndarray
    weighting: np.ndarray = field(repr=False)

    def coef(self, name: str) -> float:
        return float(self.coefficients[self.columns.index(name)])


def differenced_sample(dataset: PanelDataset, spec: ModelSpec) -> DiffSample:
    """First-differenced rows of an equation, entity by entity.

    A differenced row at year t requires complete level rows at t and t-1.
    Entities contributing no differenced rows are dropped with a warning.
    """
    sample = regression_sample(dataset, spec)
    blocks, dropped = [], []
    for i, entity in enumerate(sample.entities):
        rows = sample.entity_rows(i)
        years = sample.periods[rows]
        have = {int(t): r for t, r in zip(years, rows)}
        use = [int(t) for t in years if int(t) - 1 in have]
        if not use:
            dropped.append(entity)
            continue
        cur = np.array([have[t] for t in use])
        prev = np.array([have[t - 1] for t in use])
        blocks.append(
            (
                entity,
                np.array(use, dtype=int),
                sample.y[cur] - sample.y[prev],
                sample.X[cur] - sample.X[prev],
            )
        )
    if dropped:
        warnings.warn(
            f"gmm: dropped {len(dropped)} entity(ies) with no differenceable rows",
            PanelWarning,
            stacklevel=2,
        )
    if not blocks:
        raise ValueError(f"equation {spec.label!r}: no differenceable observations")
    return DiffSample(columns=sample.columns, blocks=tuple(blocks), spec=spec)


def build_instruments(dataset: PanelDataset, spec: ModelSpec,
                      max_depth: int | None = None, collapse: bool = False,
                      sample: DiffSample | None = None) -> InstrumentMatrix:
    """Instrument matrix for the differenced equation of a dynamic spec.

    Parameters
    ----------
    dataset, spec : data and equation; spec must set lagged_dependent.
    max_depth : int, optional
        Number of level lags per equation year (most recent first);
        None means all available back to the panel start.
    collapse : bool
        Collapse level instruments to one column per lag distance.
    sample : DiffSample, optional
        Reuse an existing aligned sample (built from the same spec).

    Returns
    -------
    InstrumentMatrix
    """
    if not spec.lagged_dependent:
        raise ValueError("build_instruments requires a lagged-dependent equation")
    if max_depth is not None and max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if sample is None:
        sample = differenced_sample(dataset, spec)
    elif sample.spec != spec:
        raise ValueError("sample was built from a different spec")
    dep = dataset[spec.dependent]
    lev = dep.values
    year_col = {y: j for j, y in enumerate(dep.periods)}
    first_year = dep.periods[0]
    ent_row = {e: i for i, e in enumerate(dep.entities)}

    def sources(t: int):
        lo = t - 1 - max_depth if max_depth is not None else first_year
        return range(max(first_year, lo), t - 1)  # s <= t-2

    all_years = sorted({int(t) for b in sample.blocks for t in b[1]})
    if collapse:
        dists = sorted({t - s for t in all_years for s in sources(t)})
        level_cols = [("dist", d) for d in dists]
    else:
        level_cols = [("pair", t, s) for t in all_years for s in sources(t)]
    exog_cols = [("diff", name) for name in sample.columns[1:]]
    col_index = {key: j for j, key in enumerate(level_cols)}
    L = len(level_cols) + len(exog_cols)

    blocks = []
    for entity, years, dy, dX in sample.blocks:
        i = ent_row[entity]
        Z = np.zeros((years.shape[0], L))
        for r, t in enumerate(years):
            for s in sources(int(t)):
                j = year_col.get(s)
                if j is None:
                    continue
                val = lev[i, j]
                if not np.isfinite(val):
                    continue
                key = ("dist", int(t) - s) if collapse else ("pair", int(t), s)
                Z[r, col_index[key]] = val
        Z[:, len(level_cols):] = dX[:, 1:]
        blocks.append((entity, years, Z))

    def label(key):
        if key[0] == "pair":
            return f"lev[{key[1]},{key[2]}]"
        if key[0] == "dist":
            return f"lev[t-{key[1]}]"
        return f"d_{key[1]}"

    columns = [label(k) for k in level_cols] + [label(k) for k in exog_cols]
    nonzero = np.zeros(L, dtype=bool)
    for _, _, Z in blocks:
        nonzero |= np.any(Z != 0.0, axis=0)
    dropped = tuple(c for c, keep in zip(columns, nonzero) if not keep)
    if dropped:
        warnings.warn(
            f"gmm: dropped {len(dropped)} all-zero instrument column(s)",
            PanelWarning,
            stacklevel=2,
        )
        blocks = [(e, yrs, Z[:, nonzero]) for e, yrs, Z in blocks]
        columns = [c for c, keep in zip(columns, nonzero) if keep]
    return InstrumentMatrix(
        columns=tuple(columns),
        blocks=tuple(blocks),
        collapse=collapse,
        max_depth=max_depth,
        dropped_columns=dropped,
    )


def _h_matrix(years: np.ndarray) -> np.ndarray:
    """Second-difference weighting block: 2 on the diagonal, -1 between
    calendar-adjacent rows."""
    m = years.shape[0]
    H = 2.0 * np.eye(m)
    for a in range(m):
        for b in range(a + 1, m):
            if abs(int(years[a]) - int(years[b])) == 1:
                H[a, b] = H[b, a] = -1.0
    return H


def _inv_psd(A: np.ndarray, what: str) -> np.ndarray:
    try:
        return np.linalg.inv(A)
    except np.linalg.LinAlgError:
        warnings.warn(f"{what}: singular weighting, using pseudo-inverse",
                      PanelWarning, stacklevel=3)
        return np.linalg.pinv(A)


def gmm_estimate(sample: DiffSample, instruments: InstrumentMatrix,
                 step: str = "twostep") -> GmmResult:
    """Estimate the differenced equation by one- or two-step GMM.

    Standard errors: one-step uses the robust sandwich; two-step uses the
    optimal-weighting form (no small-sample correction).  The J statistic
    is the criterion at the reported step's residual moments under the
    clustered one-step-residual weighting (stored as `weighting`); with
    df = instruments - columns equal to zero the p-value is None.
    """
    if step not in ("onestep", "twostep"):
        raise ValueError("step must be 'onestep' or 'twostep'")
    if len(sample.blocks) != len(instruments.blocks):
        raise ValueError("sample and instruments have different entity sets")
    k = sample.blocks[0][3].shape[1]
    L = instruments.n_instruments
    if L < k:
        raise ValueError(f"underidentified: {L} instruments for {k} parameters")

    S_zx = np.zeros((L, k))
    s_zy = np.zeros(L)
    A1 = np.zeros((L, L))
    for (e1, yrs, dy, dX), (e2, yrs2, Z) in zip(sample.blocks, instruments.blocks):
        if e1 != e2 or yrs.shape != yrs2.shape or np.any(yrs != yrs2):
            raise ValueError("instrument blocks are not aligned with the sample")
        S_zx += Z.T @ dX
        s_zy += Z.T @ dy
        A1 += Z.T @ _h_matrix(yrs) @ Z
    W1 = _inv_psd(A1, "gmm one-step")

    def solve_beta(W):
        M = S_zx.T @ W @ S_zx
        return np.linalg.solve(M, S_zx.T @ W @ s_zy), M

    beta1, M1 = solve_beta(W1)

    B = np.zeros((L, L))
    for (entity, yrs, dy, dX), (_, _, Z) in zip(sample.blocks, instruments.blocks):
        g = Z.T @ (dy - dX @ beta1)
        B += np.outer(g, g)
    W2 = _inv_psd(B, "gmm two-step")

    if step == "twostep":
        beta, M2 = solve_beta(W2)
        cov = np.linalg.inv(M2)
    else:
        beta = beta1
        Minv = np.linalg.inv(M1)
        cov = Minv @ (S_zx.T @ W1 @ B @ W1 @ S_zx) @ Minv

    m = np.zeros(L)
    for (entity, yrs, dy, dX), (_, _, Z) in zip(sample.blocks, instruments.blocks):
        m += Z.T @ (dy - dX @ beta)
    j_stat = float(m @ W2 @ m)
    j_df = L - k
    j_p = float(_st.chi2.sf(j_stat, j_df)) if j_df > 0 else None

    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.nan)
    p = 2.0 * _st.norm.sf(np.abs(t))
    return GmmResult(
        method="gmm",
        step=step,
        columns=sample.columns,
        coefficients=beta,
        std_errors=se,
        t_stats=t,
        p_values=p,
        cov=cov,
        n_obs=sample.n_obs,
        n_entities=sample.n_entities,
        periods_included=sample.periods_included,
        instrument_count=L,
        j_stat=j_stat,
        j_df=j_df,
        j_p=j_p,
        one_step_coefficients=beta1,
        weighting=W2,
    )


def j_statistic(result: GmmResult, sample: DiffSample, instruments: InstrumentMatrix) -> tuple:
    """Recompute (J, df, p) for a fitted result from its sample and instruments.

    Uses the weighting stored on the result, so for a two-step fit this
    reproduces result.j_stat exactly (an internal-consistency check).
    """
    L = instruments.n_instruments
    m = np.zeros(L)
    for (entity, yrs, dy, dX), (_, _, Z) in zip(sample.blocks, instruments.blocks):
        m += Z.T @ (dy - dX @ result.coefficients)
    Wj = result.weighting
    j = float(m @ Wj @ m)
    df = L - len(result.columns)
    return j, df, (float(_st.chi2.sf(j, df)) if df > 0 else None)
