import pytest

from api.adapter import prove_problem

PROBLEM = "cnf(c1, axiom, f(a) = b).\ncnf(c2, negated_conjecture, f(a) != b).\n"


def test_adapter_returns_structured_results():
    out = prove_problem(PROBLEM, mode="full", timeout=10.0, proof=True)
    assert out["status"] == "Unsatisfiable"
    assert "($false)" in out["proof"]
    assert out["mode"] == "full"
    assert out["stats"]["iterations"] >= 1
    assert "generated_at" in out


def test_adapter_passes_options_through():
    out = prove_problem(PROBLEM, mode="base", timeout=10.0, options={"lambda_sup": 2})
    assert out["mode"] == "base+lambda-sup=2"
    assert out["proof"] is None


def test_http_endpoints():
    pytest.importorskip("httpx")
    from fastapi.testclient import TestClient

    from api.app import app

    client = TestClient(app)
    assert client.get("/health").json() == {"status": "ok"}
    response = client.post("/prove", json={"problem": PROBLEM, "timeout": 10.0})
    assert response.status_code == 200
    assert response.json()["status"] == "Unsatisfiable"
    bad = client.post("/prove", json={"problem": "fof(a1, axiom, (p & )."})
    assert bad.status_code == 400
    job = client.post("/jobs/prove", json={"problem": PROBLEM, "timeout": 10.0}).json()
    assert job["status"] == "queued"
    # background tasks run before the test client returns
    assert client.get(f"/jobs/{job['job_id']}").json()["status"] == "done"
    assert client.get("/jobs/unknown").status_code == 404


def test_job_store_drops_oldest_finished_jobs(monkeypatch):
    pytest.importorskip("httpx")
    from fastapi.testclient import TestClient

    import api.app as service

    monkeypatch.setattr(service, "MAX_JOBS", 2)
    monkeypatch.setattr(service, "JOBS", {
        "old-done": {"status": "done", "result": {}},
        "old-error": {"status": "error", "error": "x"},
        "busy": {"status": "running"},
    })
    client = TestClient(service.app)
    job = client.post("/jobs/prove", json={"problem": PROBLEM, "timeout": 10.0}).json()
    assert set(service.JOBS) == {"busy", job["job_id"]}
    assert client.get("/jobs/old-done").status_code == 404
    assert client.get("/jobs/busy").json() == {"status": "running"}
