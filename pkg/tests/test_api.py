import numpy as np
import pytest
from api_blueprints.blueprints_utils import cached_fit, fit_cache, parse_fit_request
from api_server import app
from estimator import Ar1Spec, simulate_ar1

SERIES = simulate_ar1(Ar1Spec(n=200, seed=21)).values.tolist()


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as client:
        yield client


class TestHealth:
    def test_health(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200 and response.get_json() == {"status": "ok"}


class TestEstimatorEndpoints:
    def test_quantile(self, client):
        response = client.post("/api/quantile", json={"series": SERIES, "at": 0.0, "tau": 0.5})
        assert response.status_code == 200
        assert set(response.get_json()) == {"tau", "value", "effective_n", "h", "status"}

    def test_interval(self, client):
        response = client.post("/api/interval", json={"series": SERIES, "at": 0.5, "alpha": 0.1})
        body = response.get_json()
        assert response.status_code == 200 and body["lower"] <= body["upper"]

    def test_weights(self, client):
        response = client.post("/api/weights", json={"series": SERIES, "at": 0.0, "bandwidth": 1.0})
        body = response.get_json()
        assert response.status_code == 200
        assert sum(body["p"]) == pytest.approx(1.0) and len(body["p"]) == len(SERIES) - 1
        assert body["constraints"]["sum_residual"] <= 1e-12

    def test_cdf_curves(self, client):
        response = client.post("/api/cdf", json={"series": SERIES, "at": [-1.0, 1.0], "grid": [-10.0, 0.0, 10.0]})
        body = response.get_json()
        assert response.status_code == 200 and len(body["curves"]) == 2
        assert [point["Fhat"] for point in body["curves"][0]["curve"]][::2] == [0.0, 1.0]

    def test_bandwidth(self, client):
        response = client.post("/api/bandwidth", json={"series": SERIES, "method": "cv", "grid": [0.5, 1.0]})
        body = response.get_json()
        assert response.status_code == 200 and body["h"] in (0.5, 1.0) and len(body["losses"]) == 2

    def test_backtest(self, client):
        response = client.post("/api/backtest", json={"series": SERIES, "holdout": 3})
        body = response.get_json()
        assert response.status_code == 200
        assert [row["index"] for row in body["rows"]] == [198, 199, 200]
        assert body["summary"]["method"] == "rot"

    def test_backtest_with_cross_validated_bandwidth(self, client):
        response = client.post("/api/backtest", json={"series": SERIES, "holdout": 2, "method": "cv"})
        assert response.status_code == 200 and response.get_json()["summary"]["method"] == "cv"

    def test_backtest_rejects_unknown_method(self, client):
        response = client.post("/api/backtest", json={"series": SERIES, "method": "silverman"})
        assert response.status_code == 400 and response.get_json()["error"] == "InvalidConfig"

    def test_simulate(self, client):
        first = client.post("/api/simulate", json={"n": 20, "seed": 4}).get_json()
        second = client.post("/api/simulate", json={"n": 20, "seed": 4}).get_json()
        assert len(first["values"]) == 20 and first == second


class TestErrors:
    def test_invalid_tau_is_bad_request(self, client):
        response = client.post("/api/quantile", json={"series": SERIES, "at": 0.0, "tau": 1.5})
        assert response.status_code == 400 and response.get_json()["error"] == "InvalidTau"

    def test_no_local_data_is_unprocessable(self, client):
        response = client.post("/api/quantile", json={"series": SERIES, "at": 100.0, "bandwidth": 0.1})
        assert response.status_code == 422 and response.get_json()["error"] == "NoLocalData"

    def test_body_must_be_json(self, client):
        response = client.post("/api/quantile", data="series=1", content_type="text/plain")
        assert response.status_code == 400

    def test_non_numeric_series(self, client):
        response = client.post("/api/quantile", json={"series": [1, "a", 3], "at": 0.0})
        assert response.status_code == 400

    def test_missing_conditioning_value(self, client):
        response = client.post("/api/quantile", json={"series": SERIES})
        assert response.status_code == 400

    def test_unknown_method(self, client):
        response = client.post("/api/bandwidth", json={"series": SERIES, "method": "magic"})
        assert response.status_code == 400


class TestFitCache:
    def test_second_fit_comes_from_cache(self):
        fit_cache.clear()
        fit = parse_fit_request({"series": SERIES, "bandwidth": 0.8})
        first, first_cached = cached_fit(fit, 0.25)
        second, second_cached = cached_fit(fit, 0.25)
        assert (first_cached, second_cached) == (False, True)
        assert second is first
        np.testing.assert_array_equal(second.cum_w, first.cum_w)
