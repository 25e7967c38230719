import json

import pytest
from fastapi.testclient import TestClient

from runviz import fixtures
from runviz.service import MAX_RUNS_ENV, create_app, env_max_runs

CSV, SIDECAR = fixtures.make_fixture("edge", runs=50)

ENCODING = {
    "s1": ["low", "high", "sigma"],
    "s2": ["sep", "wep"],
    "color": ["chi2_co"],
    "opacity": [],
    "object": ["tco", "co"],
}


@pytest.fixture()
def client():
    app = create_app()
    with TestClient(app) as c:
        yield c


def new_session(client, csv=CSV, sidecar=SIDECAR):
    r = client.post("/session", json={"csv": csv, "sidecar": sidecar})
    assert r.status_code == 201, r.text
    return r.json()


class TestSession:
    def test_create_returns_summary(self, client):
        body = new_session(client)
        assert body["run_count"] == 50
        assert len(body["dimensions"]) == 9
        assert body["table_id"].startswith("t")
        roles = [d["role"] for d in body["dimensions"]]
        assert roles.count("input_control") == 3

    def test_create_without_sidecar(self, client):
        r = client.post("/session", json={"csv": "a,b\n1,2\n"})
        assert r.status_code == 201
        assert r.json()["dimensions"][0]["role"] == "unassigned"

    def test_bad_csv_is_engine_error(self, client):
        r = client.post("/session", json={"csv": ""})
        assert r.status_code == 400
        assert r.json()["code"] == "EmptyInput"

    def test_missing_csv_key(self, client):
        r = client.post("/session", json={})
        assert r.status_code == 400
        assert r.json()["code"] == "BadRequest"

    def test_unknown_session_404(self, client):
        r = client.get("/session/deadbeef/overview")
        assert r.status_code == 404
        assert r.json()["code"] == "UnknownSession"

    def test_non_object_body(self, client):
        r = client.post("/session", content=b"[1,2]", headers={"content-type": "application/json"})
        assert r.status_code == 400

    def test_expiry(self):
        now = [0.0]
        app = create_app(session_ttl=10.0, clock=lambda: now[0])
        with TestClient(app) as client:
            sid = new_session(client)["id"]
            now[0] = 5.0
            assert client.get(f"/session/{sid}/overview").status_code == 200
            now[0] = 16.0  # last access was at 5.0; idle 11 > 10
            assert client.get(f"/session/{sid}/overview").status_code == 404

    def test_access_refreshes_ttl(self):
        now = [0.0]
        app = create_app(session_ttl=10.0, clock=lambda: now[0])
        with TestClient(app) as client:
            sid = new_session(client)["id"]
            for t in (8.0, 16.0, 24.0):
                now[0] = t
                assert client.get(f"/session/{sid}/overview").status_code == 200

    def test_max_runs_env(self, monkeypatch):
        monkeypatch.setenv(MAX_RUNS_ENV, "10")
        assert env_max_runs() == 10
        app = create_app()
        with TestClient(app) as client:
            r = client.post("/session", json={"csv": CSV})
            assert r.status_code == 400
            assert r.json()["code"] == "RunLimitExceeded"

    def test_max_runs_argument_overrides_env(self, monkeypatch):
        monkeypatch.setenv(MAX_RUNS_ENV, "10")
        app = create_app(max_runs=100)
        with TestClient(app) as client:
            assert client.post("/session", json={"csv": CSV}).status_code == 201


class TestOverview:
    def test_empty_encoding(self, client):
        sid = new_session(client)["id"]
        body = client.get(f"/session/{sid}/overview").json()
        assert body["options"] == []
        assert body["layouts"] == {} and body["singles"] == {}

    def test_full_encoding(self, client):
        sid = new_session(client)["id"]
        r = client.put(f"/session/{sid}/encoding", json=ENCODING)
        assert r.status_code == 200
        body = r.json()
        assert body["options"] == [
            "SP", "wDCP", "SPLOM", "rSPLOM", "PSc", "PC", "Hist",
            "Line1D", "Box1D", "CHist1D", "Grid2D", "Jux2D", "Sup2D",
        ]
        assert set(body["layouts"]) == {"SP", "wDCP", "SPLOM", "rSPLOM", "PSc", "PC"}
        assert set(body["singles"]) == {"Hist", "Line1D", "Box1D", "CHist1D", "Grid2D", "Jux2D", "Sup2D"}
        sp = body["layouts"]["SP"]
        assert sp["shape"] == [2, 3]
        assert "spec" in sp["cells"][0][0]
        assert set(body["data"]["columns"]) == {"low", "high", "sigma", "sep", "wep", "chi2_co"}
        assert set(body["data"]["objects"]) == {"tco", "co"}
        assert body["highlights"]["preselected"] == [0, 1, 2]

    def test_invalid_encoding_rejected(self, client):
        sid = new_session(client)["id"]
        r = client.put(f"/session/{sid}/encoding", json={"s1": ["tco"]})
        assert r.status_code == 400
        assert r.json()["code"] == "InvalidEncoding"

    def test_unknown_dimension_rejected(self, client):
        sid = new_session(client)["id"]
        r = client.put(f"/session/{sid}/encoding", json={"s1": ["zz"]})
        assert r.status_code == 400
        assert r.json()["code"] == "UnknownDimension"


class TestTasks:
    def test_recommendations(self, client):
        sid = new_session(client)["id"]
        client.put(f"/session/{sid}/encoding", json=ENCODING)
        r = client.put(f"/session/{sid}/tasks", json={"tasks": ["optimization", "sensitivity"]})
        assert r.status_code == 200
        body = r.json()
        assert body["tasks"] == ["optimization", "sensitivity"]
        targets = {f["target"] for f in body["frames"]}
        assert {"SPLOM", "wDCP", "Hist", "SP", "PC", "CHist1D", "Sup2D"} <= targets
        guidance_tasks = [g["task"] for g in body["guidance"]]
        assert guidance_tasks == ["optimization", "sensitivity"]

    def test_too_many_tasks(self, client):
        sid = new_session(client)["id"]
        client.put(f"/session/{sid}/encoding", json=ENCODING)
        r = client.put(
            f"/session/{sid}/tasks",
            json={"tasks": ["fitting", "uncertainty", "outliers", "sensitivity"]},
        )
        assert r.status_code == 400
        assert r.json()["code"] == "TooManyTasks"

    def test_unknown_task(self, client):
        sid = new_session(client)["id"]
        r = client.put(f"/session/{sid}/tasks", json={"tasks": ["speedrun"]})
        assert r.status_code == 400
        assert r.json()["code"] == "UnknownTask"


class TestFilters:
    def setup_doc(self, client):
        sid = new_session(client)["id"]
        overview = client.put(f"/session/{sid}/encoding", json=ENCODING).json()
        cell = dict(overview["layouts"]["SP"]["cells"][0][0])
        cell.pop("spec")
        assert client.post(f"/session/{sid}/dashboard/views", json={"cell": cell}).status_code == 201
        return sid

    def test_range_update_and_views(self, client):
        sid = self.setup_doc(client)
        r = client.put(f"/session/{sid}/filters", json={"ranges": {"low": [0.0, 0.2]}})
        assert r.status_code == 200
        body = r.json()
        assert 0 < body["pass_count"] < 50
        assert body["pass"] == sorted(body["pass"])
        assert len(body["views"]) == 1
        assert body["views"][0]["payload"]["pass"] == body["pass"]

    def test_null_removes_range(self, client):
        sid = self.setup_doc(client)
        client.put(f"/session/{sid}/filters", json={"ranges": {"low": [0.0, 0.2]}})
        r = client.put(f"/session/{sid}/filters", json={"ranges": {"low": None}})
        assert r.json()["pass_count"] == 50

    def test_clear(self, client):
        sid = self.setup_doc(client)
        client.put(f"/session/{sid}/filters", json={"ranges": {"low": [0.0, 0.2], "sep": [0, 10]}})
        r = client.put(f"/session/{sid}/filters", json={"clear": True})
        assert r.json()["pass_count"] == 50

    def test_selected_run(self, client):
        sid = self.setup_doc(client)
        r = client.put(f"/session/{sid}/filters", json={"selected_run": 7})
        assert r.status_code == 200
        assert r.json()["views"][0]["payload"]["selected"] == 7
        r = client.put(f"/session/{sid}/filters", json={"selected_run": None})
        assert r.json()["views"][0]["payload"]["selected"] is None

    def test_bad_selected_run(self, client):
        sid = self.setup_doc(client)
        r = client.put(f"/session/{sid}/filters", json={"selected_run": 999})
        assert r.status_code == 400
        assert r.json()["code"] == "UnknownRun"

    def test_malformed_range(self, client):
        sid = self.setup_doc(client)
        r = client.put(f"/session/{sid}/filters", json={"ranges": {"low": [1, 2, 3]}})
        assert r.status_code == 400

    def test_non_quantitative_range(self, client):
        sid = self.setup_doc(client)
        r = client.put(f"/session/{sid}/filters", json={"ranges": {"co": [0, 1]}})
        assert r.status_code == 400
        assert r.json()["code"] == "NonQuantitativeFilter"


class TestDashboardRoutes:
    def test_view_lifecycle(self, client):
        sid = new_session(client)["id"]
        overview = client.put(f"/session/{sid}/encoding", json=ENCODING).json()
        cell = dict(overview["singles"]["Hist"])
        cell.pop("spec")
        r = client.post(f"/session/{sid}/dashboard/views", json={"cell": cell})
        assert r.status_code == 201
        assert [v["view_id"] for v in r.json()["views"]] == [1]

        r = client.patch(f"/session/{sid}/dashboard/views/1", json={"rect": {"x": 2, "y": 2, "w": 4, "h": 4}})
        assert r.status_code == 200
        assert r.json()["views"][0]["rect"] == {"x": 2, "y": 2, "w": 4, "h": 4}

        r = client.patch(f"/session/{sid}/dashboard/views/1", json={"bin_count": 6})
        assert r.status_code == 200
        assert r.json()["views"][0]["style"] == {"bin_count": 6}

        r = client.delete(f"/session/{sid}/dashboard/views/1")
        assert r.status_code == 200
        assert r.json()["views"] == []

    def test_external_view(self, client):
        sid = new_session(client)["id"]
        spec = {"chart": "x", "enc": {"field": "low"}}
        r = client.post(f"/session/{sid}/dashboard/views", json={"external": spec})
        assert r.status_code == 201
        assert r.json()["views"][0]["external"]["chart"] == "x"
        assert [s["dimension"] for s in r.json()["sliders"]] == ["low"]

    def test_mode_gates_mutations(self, client):
        sid = new_session(client)["id"]
        overview = client.put(f"/session/{sid}/encoding", json=ENCODING).json()
        cell = dict(overview["singles"]["Hist"])
        cell.pop("spec")
        client.post(f"/session/{sid}/dashboard/views", json={"cell": cell})
        assert client.put(f"/session/{sid}/mode", json={"mode": "analyze"}).json() == {"mode": "analyze"}
        r = client.delete(f"/session/{sid}/dashboard/views/1")
        assert r.status_code == 400
        assert r.json()["code"] == "NotEditMode"
        # filters still allowed
        assert client.put(f"/session/{sid}/filters", json={"ranges": {"low": [0, 1]}}).status_code == 200

    def test_rect_combined_with_style_rejected(self, client):
        sid = new_session(client)["id"]
        overview = client.put(f"/session/{sid}/encoding", json=ENCODING).json()
        cell = dict(overview["singles"]["Hist"])
        cell.pop("spec")
        client.post(f"/session/{sid}/dashboard/views", json={"cell": cell})
        r = client.patch(
            f"/session/{sid}/dashboard/views/1",
            json={"rect": {"x": 0, "y": 0, "w": 1, "h": 1}, "bin_count": 3},
        )
        assert r.status_code == 400

    def test_export_round_trips_through_loader(self, client):
        from runviz.dashboard import doc_from_json_dict

        sid = new_session(client)["id"]
        overview = client.put(f"/session/{sid}/encoding", json=ENCODING).json()
        cell = dict(overview["singles"]["Hist"])
        cell.pop("spec")
        client.post(f"/session/{sid}/dashboard/views", json={"cell": cell})
        client.put(f"/session/{sid}/filters", json={"ranges": {"low": [0.1, 0.3]}})
        exported = client.get(f"/session/{sid}/dashboard/export").json()
        doc = doc_from_json_dict(exported)
        assert doc.to_json_dict() == exported


class TestDeterminism:
    def test_identical_sessions_identical_bodies(self, client):
        steps = [
            ("put", "/encoding", ENCODING),
            ("put", "/tasks", {"tasks": ["optimization", "uncertainty"]}),
            ("put", "/filters", {"ranges": {"low": [0.05, 0.3]}}),
            ("get", "/overview", None),
            ("get", "/dashboard/export", None),
        ]
        bodies = []
        for _ in range(2):
            sid = new_session(client)["id"]
            out = []
            for method, path, payload in steps:
                if method == "put":
                    r = client.put(f"/session/{sid}{path}", json=payload)
                else:
                    r = client.get(f"/session/{sid}{path}")
                assert r.status_code == 200
                out.append(r.content)
            bodies.append(out)
        assert bodies[0] == bodies[1]

    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}
