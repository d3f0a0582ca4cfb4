from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from reliefmatch.service import ApiConfig, build_app
from reliefmatch.store import Store
from tests.conftest import load_fixture_jsonl

TABLE5_ROW1 = (
    "Urgent need of analgesic,antibiotics, betadiene, swabs in kathmandu!! "
    "Call for help 98XXX-XXXXX #earthquake #Nepal #KTM"
)


@pytest.fixture
def client(tmp_path, ctx):
    store = Store(tmp_path / "svc.journal", fsync=False)
    config = ApiConfig(store_path=str(tmp_path / "svc.journal"))
    app = build_app(config, store=store, ctx=ctx)
    with TestClient(app, raise_server_exceptions=False) as c:
        c.app_store = store
        yield c


def seed_table1(client):
    ids = {}
    for row in load_fixture_jsonl("table1_posts.jsonl"):
        resp = client.post(
            "/api/v1/posts",
            json={
                "text": row["text"],
                "overrides": {"id": row["id"], "kind": row["label"], "created_at": row["created_at"]},
            },
        )
        assert resp.status_code == 200, resp.text
        ids[row["id"]] = resp.json()
    return ids


def test_parse_returns_fields_without_persisting(client):
    resp = client.post("/api/v1/parse", json={"text": TABLE5_ROW1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["kind"] == "need"
    assert set(body["extraction"]["resources"]) >= {"analgesic", "antibiotics", "betadiene", "swabs"}
    assert {loc["canonical"] for loc in body["extraction"]["locations"]} == {"kathmandu", "ktm", "nepal"}
    assert body["extraction"]["contacts"] == [{"kind": "phone", "value": "98XXX-XXXXX"}]
    # nothing persisted
    assert client.get("/api/v1/posts").json()["total"] == 0


def test_parse_is_deterministic(client):
    r1 = client.post("/api/v1/parse", json={"text": TABLE5_ROW1})
    r2 = client.post("/api/v1/parse", json={"text": TABLE5_ROW1})
    assert r1.content == r2.content


def test_parse_empty_text_400(client):
    assert client.post("/api/v1/parse", json={"text": ""}).status_code == 400
    assert client.post("/api/v1/parse", json={"text": "@user http://x.co/1"}).status_code == 400


def test_posts_filtering_and_pagination(client):
    seed_table1(client)
    resp = client.get("/api/v1/posts", params={"kind": "need", "status": "active"})
    assert resp.status_code == 200
    assert {p["id"] for p in resp.json()["items"]} == {"n1", "n2", "n3"}

    resp = client.get("/api/v1/posts", params={"resource": "water"})
    assert {p["id"] for p in resp.json()["items"]} == {"n1", "a1"}

    resp = client.get("/api/v1/posts", params={"q": "water", "limit": 1})
    assert resp.json()["total"] >= 2 and len(resp.json()["items"]) == 1


def test_posts_reverse_chronological(client):
    seed_table1(client)
    items = client.get("/api/v1/posts", params={"limit": 10}).json()["items"]
    stamps = [p["created_at"] for p in items]
    assert stamps == sorted(stamps, reverse=True)


def test_limit_zero_is_400(client):
    assert client.get("/api/v1/posts", params={"limit": 0}).status_code == 400
    assert client.get("/api/v1/posts", params={"limit": "abc"}).status_code == 400


def test_bad_kind_is_400(client):
    assert client.get("/api/v1/posts", params={"kind": "wishes"}).status_code == 400


def test_suggestions_rank_paper_pairs(client, table1_pairs):
    seed_table1(client)
    for need_id, avail_id in table1_pairs.items():
        resp = client.get(f"/api/v1/posts/{need_id}/suggestions", params={"k": 20})
        assert resp.status_code == 200
        items = resp.json()["items"]
        assert items and items[0]["avail_id"] == avail_id


def test_suggestions_symmetric_for_availability(client, table1_pairs):
    seed_table1(client)
    resp = client.get("/api/v1/posts/a2/suggestions")
    assert resp.json()["items"][0]["need_id"] == "n2"


def test_suggestions_unknown_id_404(client):
    assert client.get("/api/v1/posts/ghost/suggestions").status_code == 404


def test_suggestions_k1(client):
    seed_table1(client)
    items = client.get("/api/v1/posts/n1/suggestions", params={"k": 1}).json()["items"]
    assert len(items) == 1


def test_match_lifecycle_and_status_codes(client):
    seed_table1(client)
    created = client.post("/api/v1/matches", json={"need_id": "n1", "avail_id": "a1"})
    assert created.status_code == 200
    match = created.json()
    assert match["status"] == "matched"

    assert client.get("/api/v1/posts/n1").json()["status"] == "matched"

    done = client.post(f"/api/v1/matches/{match['id']}/complete")
    assert done.status_code == 200
    assert done.json()["status"] == "completed"
    assert client.get("/api/v1/posts/a1").json()["status"] == "completed"

    again = client.post(f"/api/v1/matches/{match['id']}/complete")
    assert again.status_code == 409

    listing = client.get("/api/v1/matches", params={"status": "completed"}).json()
    assert [m["id"] for m in listing["items"]] == [match["id"]]


def test_match_kind_mismatch_422(client):
    seed_table1(client)
    resp = client.post("/api/v1/matches", json={"need_id": "n1", "avail_id": "n2"})
    assert resp.status_code == 422


def test_match_missing_post_404(client):
    seed_table1(client)
    assert client.post("/api/v1/matches", json={"need_id": "n1", "avail_id": "nope"}).status_code == 404


def test_discard_match_returns_posts_to_active(client):
    seed_table1(client)
    match = client.post("/api/v1/matches", json={"need_id": "n1", "avail_id": "a1"}).json()
    resp = client.delete(f"/api/v1/matches/{match['id']}")
    assert resp.status_code == 200
    assert client.get("/api/v1/posts/n1").json()["status"] == "active"


def test_post_with_kind_override_marks_human_edited(client):
    resp = client.post(
        "/api/v1/posts",
        json={"text": TABLE5_ROW1, "overrides": {"kind": "availability"}},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["label"] == "availability"
    assert body["label_origin"] == "human-edited"


def test_post_without_override_is_predicted(client):
    body = client.post("/api/v1/posts", json={"text": TABLE5_ROW1}).json()
    assert body["label"] == "need"
    assert body["label_origin"] == "predicted"


def test_post_invalid_override_422(client):
    resp = client.post(
        "/api/v1/posts",
        json={"text": "need water", "overrides": {"quantities": {"tents": 5}, "resources": ["water"]}},
    )
    assert resp.status_code == 422


def test_post_empty_text_400(client):
    assert client.post("/api/v1/posts", json={"text": "  "}).status_code == 400


def test_mutation_durable_before_response(client, tmp_path):
    client.post("/api/v1/posts", json={"text": "need water", "overrides": {"id": "durable-1"}})
    journal = client.app_store.path.read_text(encoding="utf-8")
    assert "durable-1" in journal


def test_spec_document_served(client):
    resp = client.get("/api/v1/spec")
    assert resp.status_code == 200
    doc = resp.json()
    assert "/api/v1/posts" in doc["paths"]


def test_error_taxonomy_closed(client):
    seed_table1(client)
    observed = set()
    observed.add(client.get("/api/v1/posts", params={"limit": 0}).status_code)
    observed.add(client.get("/api/v1/posts/ghost").status_code)
    observed.add(client.post("/api/v1/matches", json={"need_id": "n1", "avail_id": "n2"}).status_code)
    observed.add(client.post("/api/v1/matches", json={"bad": "payload"}).status_code)
    match = client.post("/api/v1/matches", json={"need_id": "n1", "avail_id": "a1"}).json()
    client.post(f"/api/v1/matches/{match['id']}/complete")
    observed.add(client.post(f"/api/v1/matches/{match['id']}/complete").status_code)
    assert observed <= {400, 404, 409, 422, 500}
