"""
Tests for web_app.py
"""
import pytest
from fastapi.testclient import TestClient

from core.config import reset_config
from web_app import app

client = TestClient(app)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BESSEL_LAB_CACHE_DIR", str(tmp_path))
    monkeypatch.delenv("BESSEL_LAB_DIGITS", raising=False)
    reset_config()
    yield
    reset_config()


class TestWebApp:
    """Test FastAPI web application"""

    def test_read_index(self):
        """Test root endpoint lists the API"""
        response = client.get("/")
        assert response.status_code == 200
        assert "/api/moment" in response.json()["endpoints"]

    def test_health(self):
        """Test the health endpoint"""
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok", "default_digits": 50}

    def test_decompose(self):
        """Test an exact decomposition"""
        response = client.post("/api/decompose", json={"kappa": 3, "n": 2, "j": 0})
        assert response.status_code == 200
        data = response.json()
        assert data["one"] == "-1/3"
        assert data["basis"] == {"m1": "2/3"}

    def test_decompose_bad_index(self):
        """Test that an invalid index is a client error"""
        response = client.post("/api/decompose", json={"kappa": 0, "n": 2, "j": 0})
        assert response.status_code == 400

    def test_decompose_unsupported(self):
        """Test that the odd subfamily is unprocessable"""
        response = client.post("/api/decompose", json={"kappa": 4, "n": 3, "j": 0})
        assert response.status_code == 422

    def test_decompose_missing_field(self):
        """Test pydantic validation"""
        response = client.post("/api/decompose", json={"kappa": 4})
        assert response.status_code == 422

    def test_catalog(self):
        """Test the continued-fraction catalog"""
        response = client.get("/api/catalog")
        assert response.status_code == 200
        data = response.json()
        assert data["count"] == 9
        assert {entry["name"] for entry in data["entries"]} >= {"zeta3_apery", "zeta3_kappa4"}

    def test_cf_eval(self):
        """Test evaluating a catalog entry"""
        response = client.post("/api/cf/eval", json={"name": "psi1_kappa3", "digits": 20})
        assert response.status_code == 200
        assert response.json()["agree_digits"] >= 15

    def test_cf_eval_unknown(self):
        """Test an unknown catalog entry"""
        response = client.post("/api/cf/eval", json={"name": "nope", "digits": 20})
        assert response.status_code == 400

    def test_moment(self):
        """Test ∫uK₀⁴ with its closed form"""
        response = client.post("/api/moment", json={"product": [1, 4], "digits": 20})
        assert response.status_code == 200
        data = response.json()
        assert data["integrand"] == "u*K0^4"
        assert data["closed_form"] == "7/8*zeta(3)"

    def test_moment_by_index(self):
        """Test the normalized-index form of the request"""
        response = client.post("/api/moment", json={"kappa": 4, "n": 0, "j": 0, "digits": 20})
        assert response.status_code == 200
        assert response.json()["integrand"] == "u*K0^4"

    def test_moment_bad_product(self):
        """Test product length and missing input"""
        assert client.post("/api/moment", json={"product": [1, 2, 3, 4, 5, 6]}).status_code == 400
        assert client.post("/api/moment", json={"digits": 20}).status_code == 400

    def test_moment_low_precision(self):
        """Test that fewer than 15 digits is a client error"""
        response = client.post("/api/moment", json={"product": [1, 4], "digits": 10})
        assert response.status_code == 400

    def test_pslq(self):
        """Test a relation between ζ(3) and 7/8·ζ(3)"""
        response = client.post("/api/pslq", json={"values": ["zeta(3)", "7/8*zeta(3)"], "digits": 40})
        assert response.status_code == 200
        data = response.json()
        assert data["found"] is True
        assert data["coefficients"] == ["7", "-8"]

    def test_pslq_bad_expression(self):
        """Test an unparsable constant"""
        response = client.post("/api/pslq", json={"values": ["zeta(", "1"], "digits": 30})
        assert response.status_code == 400

    def test_period(self):
        """Test the one-dimensional log-kernel period"""
        response = client.post("/api/period", json={"n": 3, "form": "log_kernel", "digits": 20})
        assert response.status_code == 200
        data = response.json()
        assert data["dimension"] == 1
        assert data["certified"] is True

    def test_period_bad_request(self):
        """Test an invalid period request"""
        response = client.post("/api/period", json={"n": 2, "digits": 20})
        assert response.status_code == 400
