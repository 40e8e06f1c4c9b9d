"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import cryptoforecast as cf


def test_pearson_matches_closed_form():
    x = np.array([1.0, 2.0, 3.0])
    assert cf.pearson(x, x) == pytest.approx(1.0)
    assert cf.pearson(x, -x) == pytest.approx(-1.0)
    assert cf.pearson(x, np.array([1.0, 2.0, 4.0])) == pytest.approx(0.98198, abs=1e-4)


def test_intensity_classes():
    assert cf.intensity_class(0.1) == "weak"
    assert cf.intensity_class(0.3) == "average"
    assert cf.intensity_class(-0.6) == "above_average"
    assert cf.intensity_class(0.9) == "high"


def test_window_means():
    values = np.array([1.0, 2.0, 3.0, 4.0])
    assert cf.window_mean(values, "sliding", 2) == [1.5, 2.5, 3.5]
    assert cf.window_mean(values, "tumbling", 2) == [1.5, 3.5]


def test_chi2_survival():
    assert cf.chi2_survival(0.0, 3) == 1.0
    assert cf.chi2_survival(3.841, 1) == pytest.approx(0.05, abs=5e-4)


def test_stationarity_tests_agree_with_dgps():
    rng = np.random.default_rng(7)
    noise = rng.standard_normal(400)
    walk = np.cumsum(rng.standard_normal(400))
    assert cf.adf_test(noise)["stationary_5pct"]
    assert not cf.adf_test(walk)["stationary_5pct"]
    assert cf.kpss_test(noise)["stationary_5pct"]
    assert cf.integration_order(noise)["d"] == 0
    assert cf.integration_order(walk)["d"] == 1


def test_toda_yamamoto_planted_causality():
    rng = np.random.default_rng(11)
    x = np.cumsum(rng.standard_normal(1200))
    y = np.empty(1200)
    y[0] = 0.0
    y[1:] = 0.8 * x[:-1] + rng.standard_normal(1199)
    res = cf.toda_yamamoto(x, y, p_max=5)
    assert res["reject_5pct"]
    assert res["dof"] == res["p"]


def test_gbt_fit_predict_roundtrip():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((400, 2))
    y = 2.0 * X[:, 0] - X[:, 1] + 0.05 * rng.standard_normal(400)
    Xv = rng.standard_normal((100, 2))
    yv = 2.0 * Xv[:, 0] - Xv[:, 1]
    model = cf.GbtModel.fit(X, y, Xv, yv, learning_rate=0.1, max_iterations=80, patience=80)
    pred = model.predict(Xv)
    rmse = float(np.sqrt(np.mean((pred - yv) ** 2)))
    assert rmse < 0.5 * float(np.std(yv))

    restored = cf.GbtModel.from_json(model.to_json())
    assert np.array_equal(restored.predict(Xv), pred)


def test_rnn_fit_predict():
    t = np.arange(700, dtype=np.float64)
    X = np.sin(0.2 * t).reshape(-1, 1)
    y = np.sin(0.2 * (t + 1))
    model = cf.RnnModel.fit(
        X[:500], y[:500], X[500:600], y[500:600],
        cell="gru", depth=1, width=12, bptt_window=25, batch_size=4,
        learning_rate=0.01, max_epochs=60, patience=15, seed=1,
    )
    pred = model.predict(X[600:])
    rmse = float(np.sqrt(np.mean((pred - y[600:]) ** 2)))
    assert rmse < 0.25

    restored = cf.RnnModel.from_json(model.to_json())
    assert np.array_equal(restored.predict(X[600:]), pred)


def test_metrics():
    truth = np.array([100.0, 200.0])
    pred = np.array([110.0, 190.0])
    m = cf.compute_metrics(pred, truth)
    assert m["mse"] == pytest.approx(100.0)
    assert m["rmse"] == pytest.approx(10.0)
    assert m["mae"] == pytest.approx(10.0)
    assert m["mape"] == pytest.approx(0.075)
    zero = cf.compute_metrics(np.array([1.0]), np.array([0.0]))
    assert zero["mape"] is None
