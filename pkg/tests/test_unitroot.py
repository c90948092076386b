"""Unit-root battery: ADF, Phillips-Perron, LLC, IPS, Fisher combination."""

import math

import numpy as np
import pytest

from panelmetrics._dfconstants import mackinnon_p
from panelmetrics.data import PanelDataset, PanelWarning, VariableSeries
from panelmetrics.unitroot import (
    _bartlett_lrv,
    adf_test,
    default_lags,
    fisher_combine,
    ips_test,
    llc_test,
    neweywest_bandwidth,
    pp_test,
    run_battery,
)


def make_series(rows, name="v", start=1950):
    rows = np.asarray(rows, dtype=float)
    entities = tuple(f"E{i}" for i in range(rows.shape[0]))
    periods = tuple(range(start, start + rows.shape[1]))
    return VariableSeries(name=name, entities=entities, periods=periods, values=rows)


def make_dataset(rows, name="v", start=1950):
    series = make_series(rows, name=name, start=start)
    ds = PanelDataset(entities=series.entities, periods=series.periods)
    ds.add(series)
    return ds


def ar_panel(rng, n, T, rho):
    z = np.zeros((n, T))
    eps = rng.standard_normal((n, T))
    for t in range(1, T):
        z[:, t] = rho * z[:, t - 1] + eps[:, t]
    return z


class TestDefaultLags:
    @pytest.mark.parametrize(
        "T, expected", [(9, 2), (25, 2), (50, 3), (100, 4), (200, 4)]
    )
    def test_schwert_rule(self, T, expected):
        assert default_lags(T) == expected

    def test_needs_positive_length(self):
        with pytest.raises(ValueError):
            default_lags(0)


class TestAdf:
    def test_hand_normal_equations(self):
        # dy = rho * y_lag + c over the 5 usable rows, solved by scalar
        # normal equations; tau works out to exactly -1.8
        y = np.array([1.0, 2.0, 1.5, 2.5, 2.0, 3.0])
        ylag, dy = y[:-1], np.diff(y)
        n = 5
        sx, sxx = ylag.sum(), (ylag**2).sum()
        sy, sxy = dy.sum(), (ylag * dy).sum()
        det = n * sxx - sx * sx
        rho = (n * sxy - sx * sy) / det
        resid = dy - rho * ylag - (sy - rho * sx) / n
        se = math.sqrt((resid @ resid) / (n - 2) * n / det)
        tau = rho / se
        assert tau == pytest.approx(-1.8, abs=1e-12)

        r = adf_test(y, det="c", lags=0)
        assert r.statistic == pytest.approx(tau, abs=1e-6)
        assert r.n_obs == 5
        assert 0.0 <= r.p_value <= 1.0

    def test_white_noise_detected_stationary(self):
        rng = np.random.default_rng(42)
        r = adf_test(rng.standard_normal(200), det="c", lags=0)
        assert r.p_value < 0.05

    def test_random_walk_not_rejected(self):
        rng = np.random.default_rng(5)
        hits = sum(
            adf_test(np.cumsum(rng.standard_normal(200)), det="c", lags=0).p_value > 0.05
            for _ in range(100)
        )
        assert hits >= 90

    def test_too_short_for_lags(self):
        with pytest.raises(ValueError, match="cannot support"):
            adf_test([1.0, 2.0, 1.0], det="c", lags=1)

    def test_missing_values_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            adf_test([1.0, np.nan, 2.0, 3.0, 2.0, 4.0])

    def test_bad_arguments(self):
        y = np.arange(20.0) + np.sin(np.arange(20.0))
        with pytest.raises(ValueError, match="deterministic"):
            adf_test(y, det="cc")
        with pytest.raises(ValueError, match="nonnegative"):
            adf_test(y, lags=-1)

    def test_rows_follow_lag_count(self):
        rng = np.random.default_rng(6)
        y = rng.standard_normal(30)
        assert adf_test(y, lags=2).n_obs == 27


class TestMacKinnonSurface:
    @pytest.mark.parametrize("det, cv", [("c", -2.86), ("ct", -3.41), ("n", -1.95)])
    def test_classic_five_percent_points(self, det, cv):
        # textbook asymptotic 5% critical values land near p = 0.05
        assert mackinnon_p(cv, det) == pytest.approx(0.05, abs=0.01)

    def test_clamps(self):
        assert mackinnon_p(5.0, "c") == 1.0
        assert mackinnon_p(-25.0, "c") == 0.0

    @pytest.mark.parametrize("det", ["n", "c", "ct"])
    def test_monotone_in_statistic(self, det):
        grid = np.linspace(-19.0, 0.0, 300)
        p = np.array([mackinnon_p(float(s), det) for s in grid])
        assert np.all(np.diff(p) >= 0.0)
        assert np.all((p >= 0.0) & (p <= 1.0))


class TestPhillipsPerron:
    def test_bandwidth_zero_equals_adf(self):
        rng = np.random.default_rng(7)
        y = np.cumsum(rng.standard_normal(80))
        a = adf_test(y, det="c", lags=0)
        p = pp_test(y, det="c", bandwidth=0)
        assert p.statistic == pytest.approx(a.statistic, abs=1e-12)
        assert p.p_value == pytest.approx(a.p_value, abs=1e-12)

    def test_correction_vanishes_without_serial_correlation(self):
        rng = np.random.default_rng(7)
        y = rng.standard_normal(300)
        tau = adf_test(y, det="c", lags=0).statistic
        assert abs(pp_test(y, det="c").statistic - tau) <= 0.15
        assert abs(pp_test(y, det="c", bandwidth=4).statistic - tau) <= 0.15

    def test_random_walk_size(self):
        rng = np.random.default_rng(9)
        hits = sum(
            pp_test(np.cumsum(rng.standard_normal(200)), det="c").p_value > 0.05
            for _ in range(200)
        )
        assert hits >= 180

    def test_bandwidth_validation(self):
        y = np.arange(12.0) + np.cos(np.arange(12.0))
        with pytest.raises(ValueError, match="nonnegative"):
            pp_test(y, bandwidth=-1)
        with pytest.raises(ValueError, match="too large"):
            pp_test(y, bandwidth=50)


class TestNeweyWestBandwidth:
    def test_matches_documented_formula(self):
        rng = np.random.default_rng(15)
        u = rng.standard_normal(120)
        u = u + np.concatenate(([0.0], 0.6 * u[:-1]))
        T = u.shape[0]
        n = min(default_lags(T), T - 2)
        sig = [float(u @ u) / T] + [float(u[j:] @ u[:-j]) / T for j in range(1, n + 1)]
        s0 = sig[0] + 2.0 * sum(sig[1:])
        s1 = 2.0 * sum(j * sig[j] for j in range(1, n + 1))
        expected = int(np.clip(np.floor(1.1447 * ((s1 / s0) ** 2 * T) ** (1 / 3)), 0, T - 2))
        assert neweywest_bandwidth(u) == expected

    def test_persistent_series_gets_wider_window(self):
        rng = np.random.default_rng(16)
        iid = rng.standard_normal(500)
        ar = ar_panel(np.random.default_rng(17), 1, 500, 0.9)[0]
        assert neweywest_bandwidth(iid) <= 5
        assert neweywest_bandwidth(ar) > neweywest_bandwidth(iid)

    def test_short_vector_rejected(self):
        with pytest.raises(ValueError):
            neweywest_bandwidth([1.0, 2.0, 3.0])


class TestBartlettVariance:
    def test_bandwidth_zero_is_mean_square(self):
        u = np.array([1.0, -2.0, 3.0, -1.0, 0.5])
        assert _bartlett_lrv(u, 0) == pytest.approx(float(u @ u) / 5, abs=1e-15)

    def test_hand_sum_small_vector(self):
        u = np.array([1.0, 2.0, -1.0, 3.0])
        g0 = (1 + 4 + 1 + 9) / 4
        g1 = (1 * 2 - 2 * 1 - 1 * 3) / 4
        g2 = (1 * -1 + 2 * 3) / 4
        expected = g0 + 2 * (2 / 3) * g1 + 2 * (1 / 3) * g2
        assert _bartlett_lrv(u, 2) == pytest.approx(expected, abs=1e-12)

    def test_ma1_long_run_variance(self):
        # u_t = e_t + 0.5 e_{t-1} has long-run variance (1 + 0.5)^2 = 2.25
        rng = np.random.default_rng(8)
        e = rng.standard_normal(200001)
        u = e[1:] + 0.5 * e[:-1]
        assert _bartlett_lrv(u, 30) == pytest.approx(2.25, abs=0.15)


class TestFisherCombine:
    def test_pinned_pair(self):
        stat, df, p = fisher_combine([0.05, 0.05])
        assert stat == pytest.approx(11.98293, abs=1e-3)
        assert df == 4
        assert p == pytest.approx(0.01748, abs=1e-4)
        # chi-square(4) survival in closed form as the second route
        assert p == pytest.approx(math.exp(-stat / 2) * (1 + stat / 2), rel=1e-9)

    def test_all_ones_vanish(self):
        stat, df, p = fisher_combine([1.0, 1.0, 1.0])
        assert stat == 0.0
        assert df == 6
        assert p == pytest.approx(1.0)

    def test_zero_p_clamped_with_warning(self):
        with pytest.warns(PanelWarning, match="clamped"):
            stat, _, p = fisher_combine([0.0, 0.5])
        assert np.isfinite(stat)
        assert stat == pytest.approx(-2 * (math.log(1e-16) + math.log(0.5)), rel=1e-9)

    def test_floor_applies_below_1e16(self):
        lo, _, _ = fisher_combine([1e-20])
        ref, _, _ = fisher_combine([1e-16])
        assert lo == pytest.approx(ref, rel=1e-12)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            fisher_combine([])
        with pytest.raises(ValueError):
            fisher_combine([0.5, 1.5])
        with pytest.raises(ValueError):
            fisher_combine([0.5, np.nan])

    def test_permutation_invariant_and_monotone(self):
        a = fisher_combine([0.1, 0.4, 0.7])[0]
        assert fisher_combine([0.7, 0.1, 0.4])[0] == pytest.approx(a, abs=1e-12)
        assert fisher_combine([0.05, 0.4, 0.7])[0] > a


class TestIps:
    def test_identical_entities_share_tau(self):
        rng = np.random.default_rng(3)
        y = np.cumsum(np.abs(rng.standard_normal(30)))
        r = ips_test(make_series([y, y.copy()]))
        taus = {round(row[1], 12) for row in r.per_entity}
        assert len(taus) == 1
        direct = adf_test(y, det="c", lags=r.per_entity[0][3])
        assert r.per_entity[0][1] == pytest.approx(direct.statistic, abs=1e-12)

    def test_per_entity_rows_match_direct_adf(self):
        rng = np.random.default_rng(19)
        rows = [ar_panel(rng, 1, 40, rho)[0] for rho in (0.2, 0.5, 0.8)]
        r = ips_test(make_series(rows))
        for i, (entity, tau, p, lags) in enumerate(r.per_entity):
            direct = adf_test(rows[i], det="c", lags=lags)
            assert tau == pytest.approx(direct.statistic, abs=1e-10)
            assert p == pytest.approx(direct.p_value, abs=1e-10)

    def test_stationary_pair_has_negative_statistic(self):
        rng = np.random.default_rng(13)
        r = ips_test(make_series(ar_panel(rng, 2, 50, 0.2)))
        assert r.statistic < 0.0
        assert r.p_value == pytest.approx(
            float(0.5 * (1 + math.erf(r.statistic / math.sqrt(2)))), abs=1e-12
        )

    def test_mixed_panel_power(self):
        rng = np.random.default_rng(12)
        hits = 0
        for _ in range(100):
            rows = [np.cumsum(rng.standard_normal(50)) for _ in range(10)]
            rows.extend(ar_panel(rng, 10, 50, 0.3))
            if ips_test(make_series(rows)).p_value < 0.05:
                hits += 1
        assert hits >= 80

    def test_unsupported_det_rejected(self):
        rng = np.random.default_rng(14)
        with pytest.raises(ValueError, match="moment table"):
            ips_test(make_series(ar_panel(rng, 3, 30, 0.3)), det="n")

    def test_short_entities_dropped_then_error(self):
        rng = np.random.default_rng(18)
        with pytest.warns(PanelWarning, match="dropped"):
            with pytest.raises(ValueError, match="fewer than two"):
                ips_test(make_series(rng.standard_normal((3, 6))))


class TestLlc:
    def test_single_entity_rejected(self):
        rng = np.random.default_rng(22)
        with pytest.raises(ValueError, match="fewer than two"):
            llc_test(make_series(rng.standard_normal((1, 40))))

    def test_short_panel_below_adjustment_table(self):
        rng = np.random.default_rng(23)
        rows = np.cumsum(rng.standard_normal((4, 9)), axis=1)
        with pytest.raises(ValueError, match="adjustment table"):
            llc_test(make_series(rows))

    def test_random_walk_size(self):
        rng = np.random.default_rng(20)
        hits = 0
        for _ in range(100):
            rows = np.cumsum(rng.standard_normal((20, 50)), axis=1)
            if llc_test(make_series(rows)).p_value > 0.05:
                hits += 1
        assert hits >= 90

    def test_stationary_power(self):
        rng = np.random.default_rng(11)
        hits = 0
        for _ in range(100):
            if llc_test(make_series(ar_panel(rng, 20, 50, 0.3))).p_value < 0.05:
                hits += 1
        assert hits >= 95

    def test_p_is_lower_tail(self):
        rng = np.random.default_rng(24)
        r = llc_test(make_series(ar_panel(rng, 8, 40, 0.5)))
        assert r.p_value == pytest.approx(
            float(0.5 * (1 + math.erf(r.statistic / math.sqrt(2)))), abs=1e-12
        )


class TestBattery:
    def test_stationary_panel_rejects_everywhere(self):
        rng = np.random.default_rng(41)
        b = run_battery(make_dataset(ar_panel(rng, 20, 100, 0.3)))
        assert set(b.cells) == {
            ("v", order, test) for order in b.orders for test in b.tests
        }
        for cell in b.cells.values():
            assert cell.error is None
            assert cell.result.p_value < 0.05

    def test_random_walk_pattern(self):
        rng = np.random.default_rng(42)
        rows = np.cumsum(rng.standard_normal((20, 50)), axis=1)
        b = run_battery(make_dataset(rows))
        assert b.cell("v", "level", "fisher-adf").result.p_value > 0.05
        assert b.cell("v", "difference", "fisher-adf").result.p_value < 0.05

    def test_short_panel_marks_llc_cells(self):
        # T = 9 supports the Fisher and IPS tests but sits below the LLC
        # adjustment table, so those cells carry error markers instead
        rng = np.random.default_rng(43)
        rows = np.cumsum(rng.standard_normal((6, 9)), axis=1)
        b = run_battery(make_dataset(rows))
        assert "adjustment table" in b.cell("v", "level", "llc").error
        assert b.cell("v", "level", "fisher-adf").result is not None
        assert b.cell("v", "level", "ips").result is not None

    def test_missing_variable_raises(self):
        rng = np.random.default_rng(44)
        ds = make_dataset(rng.standard_normal((4, 30)))
        with pytest.raises(KeyError):
            run_battery(ds, variables=["ghost"])
