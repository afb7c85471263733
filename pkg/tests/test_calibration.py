import math

import numpy as np
import pytest

from multiwall.calibration import (
    Measurement,
    WallLossSample,
    differential_wall_loss,
    fit_joint,
    fit_log_distance,
    fit_wall_loss,
    joint_design,
    lstsq,
)
from multiwall.errors import CalibrationError, RankDeficientError
from multiwall.pathloss import ModelParams, simplified_multiwall

from conftest import plan_from_segments
from oracles import brute_lstsq

TABLE1 = [WallLossSample(1, 18.62, 1.26, 2.15), WallLossSample(2, 35.86, 2.92, 3.95),
          WallLossSample(3, 52.87, 2.96, 6.5)]

# three long parallel walls at x = 1, 3, 5
PLAN = plan_from_segments([((1, -50), (1, 50)), ((3, -50), (3, 50)), ((5, -50), (5, 50))], loss_db=5.0)


def synthetic_links(rng, n, params, noise=0.0, override=False):
    out = []
    for _ in range(n):
        rx = (rng.uniform(0.2, 8.0), rng.uniform(-4.0, 4.0))
        if rx[0] in (1.0, 3.0, 5.0):
            continue
        m = sum(rx[0] > x for x in (1.0, 3.0, 5.0))
        d = math.hypot(*rx)
        pl = simplified_multiwall(params, d, m).total_db + (rng.normal(0, noise) if noise else 0.0)
        out.append(Measurement((0.0, 0.0), rx, pl_db=pl, m_override=m if override else None))
    return out


@pytest.mark.parametrize("free, walled, expected", [
    (-30.0, -48.62, 18.62),
    (-30.0, -82.87, 52.87),
    (-61.5, -61.5, 0.0),
])
def test_differential_wall_loss(free, walled, expected):
    assert differential_wall_loss(free, walled) == pytest.approx(expected, abs=1e-12)


def test_fit_wall_loss_table1():
    res = fit_wall_loss(TABLE1)
    # (18.62 + 2*35.86 + 3*52.87) / (1 + 4 + 9) = 248.95 / 14
    assert res.params.pl_w_db == pytest.approx(248.95 / 14, abs=1e-12)
    assert round(res.params.pl_w_db, 2) == 17.78
    assert res.fitted == ("pl_w_db",)
    assert res.n_points == 3


def test_fit_wall_loss_with_intercept_would_not_reproduce():
    # the through-origin reading is the one that gives 17.78
    slope = np.polyfit([1, 2, 3], [18.62, 35.86, 52.87], 1)[0]
    assert abs(slope - 17.78) > 0.5


def test_fit_wall_loss_single_sample():
    res = fit_wall_loss([WallLossSample(1, 12.5)])
    assert res.params.pl_w_db == 12.5
    assert res.residuals_db == (0.0,)


def test_fit_wall_loss_exact_line():
    res = fit_wall_loss([WallLossSample(m, 4.25 * m) for m in (1, 2, 5, 7)])
    assert res.params.pl_w_db == pytest.approx(4.25, abs=1e-12)
    assert res.rmse_db == pytest.approx(0.0, abs=1e-12)


def test_fit_wall_loss_empty():
    with pytest.raises(CalibrationError):
        fit_wall_loss([])


def test_wall_sample_invariants():
    with pytest.raises(ValueError):
        WallLossSample(0, 3.0)
    with pytest.raises(ValueError):
        WallLossSample(1, math.inf)


def test_fit_wall_loss_agrees_with_generic_solver():
    rng = np.random.default_rng(5)
    for _ in range(100):
        m = rng.integers(1, 10, rng.integers(1, 12))
        loss = m * rng.uniform(2, 20) + rng.normal(0, 2, m.size)
        res = fit_wall_loss([WallLossSample(int(a), float(b)) for a, b in zip(m, loss)])
        generic = np.linalg.lstsq(m[:, None].astype(float), loss, rcond=None)[0][0]
        assert abs(res.params.pl_w_db - generic) <= 1e-9


@pytest.mark.parametrize("points, pl0, n", [
    ([(1, 40), (10, 70)], 40.0, 3.0),
    ([(1, 40), (10, 60), (100, 80)], 40.0, 2.0),
])
def test_fit_log_distance_exact(points, pl0, n):
    res = fit_log_distance(points)
    assert res.params.pl0_db == pytest.approx(pl0, abs=1e-9)
    assert res.params.n == pytest.approx(n, abs=1e-9)
    assert res.rmse_db == pytest.approx(0.0, abs=1e-9)


def test_fit_log_distance_synthetic_recovery():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = ModelParams(rng.uniform(20, 60), rng.uniform(1.2, 5))
        d = rng.uniform(0.5, 80, rng.integers(3, 20))
        pts = [(x, simplified_multiwall(p, x, 0).total_db) for x in d]
        res = fit_log_distance(pts)
        assert res.params.pl0_db == pytest.approx(p.pl0_db, abs=1e-9)
        assert res.params.n == pytest.approx(p.n, abs=1e-9)


def test_fit_log_distance_rank_error():
    with pytest.raises(RankDeficientError) as info:
        fit_log_distance([(2.0, 50.0), (2.0, 51.0), (2.0, 52.0)])
    assert info.value.column == "log_distance"


def test_fit_joint_noiseless_recovery():
    rng = np.random.default_rng(0)
    truth = ModelParams(40.0, 2.0, 5.0)
    res = fit_joint(synthetic_links(rng, 40, truth), PLAN)
    assert res.params.pl0_db == pytest.approx(40.0, abs=1e-6)
    assert res.params.n == pytest.approx(2.0, abs=1e-6)
    assert res.params.pl_w_db == pytest.approx(5.0, abs=1e-6)
    assert res.fitted == ("pl0_db", "n", "pl_w_db")


def test_fit_joint_matches_exact_normal_equations():
    rng = np.random.default_rng(2)
    meas = synthetic_links(rng, 12, ModelParams(38.0, 3.1, 7.0), noise=2.0)
    res = fit_joint(meas, PLAN)
    X, y = joint_design(meas, PLAN)
    ref = brute_lstsq(X, y)
    assert [res.coefficients[k] for k in ("pl0_db", "n", "pl_w_db")] == pytest.approx(ref, abs=1e-8)


def test_fit_joint_uses_rss_and_override():
    truth = ModelParams(40.0, 2.0, 5.0)
    meas = []
    for i, (d, m) in enumerate([(1.5, 0), (2.0, 1), (4.0, 1), (6.0, 2), (9.0, 3), (3.0, 0)]):
        pl = simplified_multiwall(truth, d, m).total_db
        if i % 2:
            meas.append(Measurement((0, 0), (0, d), rss_dbm=20.0 - pl, tx_power_dbm=20.0, m_override=m))
        else:
            meas.append(Measurement((0, 0), (0, d), pl_db=pl, m_override=m))
    res = fit_joint(meas, PLAN)
    assert res.params.pl_w_db == pytest.approx(5.0, abs=1e-6)


@pytest.mark.parametrize("walls, column", [
    ([0, 0, 0, 0], "m_walls"),
    ([2, 2, 2, 2], "m_walls"),
])
def test_fit_joint_constant_walls_rank_error(walls, column):
    meas = [Measurement((0, 0), (0, d), pl_db=50.0 + d, m_override=m) for d, m in zip((1, 2, 4, 8), walls)]
    with pytest.raises(RankDeficientError) as info:
        fit_joint(meas, PLAN)
    assert info.value.column == column
    assert column in str(info.value)


def test_fit_joint_constant_distance_rank_error():
    meas = [Measurement((0, 0), (0, 3), pl_db=50.0 + m, m_override=m) for m in (0, 1, 2, 3)]
    with pytest.raises(RankDeficientError) as info:
        fit_joint(meas, PLAN)
    assert info.value.column == "log_distance"


def test_fit_joint_too_few():
    with pytest.raises(CalibrationError):
        fit_joint([Measurement((0, 0), (0, 3), pl_db=50.0)] * 2, PLAN)


def test_ols_orthogonality_and_rmse_identity():
    rng = np.random.default_rng(8)
    meas = synthetic_links(rng, 200, ModelParams(41.0, 2.7, 6.5), noise=3.0)
    res = fit_joint(meas, PLAN)
    X, y = joint_design(meas, PLAN)
    r = np.asarray(res.residuals_db)
    scale = np.abs(X).max() * np.abs(y).max()
    assert np.max(np.abs(X.T @ r)) / scale <= 1e-6
    assert res.rmse_db ** 2 * res.n_points == pytest.approx(np.sum(r * r), abs=1e-9)

    pts = [(m.distance_m, m.path_loss_db) for m in meas if m.wall_count(PLAN) == 0]
    res2 = fit_log_distance(pts)
    d = np.array([p[0] for p in pts])
    X2 = np.column_stack([np.ones_like(d), 10 * np.log10(d)])
    assert np.max(np.abs(X2.T @ np.asarray(res2.residuals_db))) / (np.abs(X2).max() * 200) <= 1e-6


def test_fit_joint_permutation_invariance():
    rng = np.random.default_rng(9)
    meas = synthetic_links(rng, 100, ModelParams(41.0, 2.7, 6.5), noise=3.0)
    a = fit_joint(meas, PLAN).coefficients
    for _ in range(5):
        perm = [meas[i] for i in rng.permutation(len(meas))]
        b = fit_joint(perm, PLAN).coefficients
        for k in a:
            assert abs(a[k] - b[k]) <= 1e-9


def test_fit_joint_monte_carlo_coverage():
    truth = ModelParams(40.0, 2.0, 5.0)
    sigma = 3.0
    inside = total = 0
    for seed in range(200):
        rng = np.random.default_rng(1000 + seed)
        meas = synthetic_links(rng, 500, truth, noise=sigma, override=True)
        res = fit_joint(meas, PLAN)
        X, _ = joint_design(meas, PLAN)
        se = sigma * np.sqrt(np.diag(np.linalg.inv(X.T @ X)))
        est = np.array([res.params.pl0_db, res.params.n, res.params.pl_w_db])
        err = np.abs(est - np.array([truth.pl0_db, truth.n, truth.pl_w_db]))
        inside += int(np.sum(err <= 3 * se))
        total += 3
    assert inside / total >= 0.99


def test_lstsq_generic():
    X = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
    coef, resid = lstsq(X, [1.0, 3.0, 5.0])
    assert coef == pytest.approx([1.0, 2.0], abs=1e-12)
    assert np.allclose(resid, 0)
    with pytest.raises(RankDeficientError):
        lstsq(np.ones((3, 2)), [1.0, 2.0, 3.0], names=["a", "b"])


def test_measurement_invariants():
    with pytest.raises(ValueError):
        Measurement((0, 0), (1, 0))
    with pytest.raises(ValueError):
        Measurement((0, 0), (1, 0), rss_dbm=-40.0, pl_db=60.0)
    with pytest.raises(ValueError):
        Measurement((0, 0), (1, 0), rss_dbm=-40.0)
    assert Measurement((0, 0), (1, 0), rss_dbm=-40.0, tx_power_dbm=20.0).path_loss_db == 60.0
