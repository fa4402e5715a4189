import json

import pytest
from fastapi.testclient import TestClient

from heirec.corpus import build_index, persist_index
from heirec.hei import DEFAULT_STANDARDS, score_user
from heirec.ingest import FoodItem, gen_synthetic_population, write_persons_csv
from heirec.recommender import Modification, delta_hei
from heirec.service import ServiceConfig, create_app, load_state


@pytest.fixture(scope="module")
def service_state(tmp_path_factory, fixture_foods):
    root = tmp_path_factory.mktemp("gateway")
    users = gen_synthetic_population(42, 30)
    write_persons_csv(root / "persons.csv", users)
    # include a zero-effect food for the what-if identity case
    foods = list(fixture_foods) + [
        FoodItem(99990, "nothing at all", "1 serving", frozenset())]
    persist_index(build_index(foods), root / "index")
    cfg = ServiceConfig(persons_path=str(root / "persons.csv"),
                        index_dir=str(root / "index"))
    return load_state(cfg)


@pytest.fixture(scope="module")
def client(service_state):
    return TestClient(create_app(service_state))


class TestHealthAndErrors:
    def test_health_ok(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}

    def test_unknown_user_404(self, client):
        resp = client.get("/users/999999/hei")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_user"

    def test_invalid_portion_422(self, client, service_state):
        code = service_state.index.items[0].food_code
        resp = client.post("/whatif", json={"seqn": 1, "food_code": code,
                                            "portion": 2.0})
        assert resp.status_code == 422
        assert resp.json()["code"] == "invalid_portion"

    def test_unknown_food_404(self, client):
        resp = client.post("/whatif", json={"seqn": 1, "food_code": 123456789,
                                            "portion": 1.0})
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_food"


class TestUserHei:
    def test_matches_engine(self, client, service_state):
        user = service_state.users[5]
        resp = client.get("/users/5/hei")
        assert resp.status_code == 200
        body = resp.json()
        assert body["total"] == pytest.approx(score_user(user).total, abs=1e-12)
        assert len(body["components"]) == 13


class TestRecommendations:
    def test_fallback_explanations_when_llm_disabled(self, client):
        body = client.get("/users/3/recommendations?k=5").json()
        assert body["explainer"] == "fallback"
        assert len(body["recommendations"]) == len(body["plan"]["steps"])
        for rec in body["recommendations"]:
            assert rec["rationale"].startswith("Adds ")

    def test_alternatives_disjoint_from_plan(self, client):
        body = client.get("/users/3/recommendations?k=5").json()
        plan_codes = {s["food_code"] for s in body["plan"]["steps"]}
        alt_codes = [a["food_code"] for a in body["alternatives"]]
        assert len(alt_codes) <= 5
        assert plan_codes.isdisjoint(alt_codes)
        assert len(alt_codes) == len(set(alt_codes))

    def test_anticipated_deltas_resum_to_plan_improvement(self, client):
        body = client.get("/users/7/recommendations?k=3").json()
        total = body["plan"]["final_total"] - body["plan"]["baseline_total"]
        resum = sum(r["anticipated_delta"] for r in body["recommendations"])
        assert resum == pytest.approx(total, abs=1e-6)

    def test_deterministic(self, client):
        a = client.get("/users/9/recommendations?k=4").json()
        b = client.get("/users/9/recommendations?k=4").json()
        assert a == b


class TestWhatIf:
    def test_zero_effect_food(self, client):
        body = client.post("/whatif", json={"seqn": 2, "food_code": 99990,
                                            "portion": 1.0}).json()
        assert body["delta_h"] == 0.0
        assert all(v == 0.0 for v in body["component_deltas"].values())

    def test_matches_delta_hei_oracle(self, client, service_state):
        user = service_state.users[4]
        food = service_state.index.items[10]
        resp = client.post("/whatif", json={"seqn": 4, "food_code": food.food_code,
                                            "portion": 1.5}).json()
        dh, deltas = delta_hei(user.intake, food,
                               Modification(food.food_code, "ADD", 1.5),
                               DEFAULT_STANDARDS)
        assert resp["delta_h"] == pytest.approx(dh, abs=1e-9)
        for cid, v in deltas.items():
            assert resp["component_deltas"][cid] == pytest.approx(v, abs=1e-9)

    def test_stateless_repeats(self, client, service_state):
        food = service_state.index.items[0]
        req = {"seqn": 6, "food_code": food.food_code, "portion": 0.5}
        assert client.post("/whatif", json=req).json() == \
            client.post("/whatif", json=req).json()

    def test_inline_profile_compounds(self, client, service_state):
        food = service_state.index.items[3]
        first = client.post("/whatif", json={"seqn": 8, "food_code": food.food_code,
                                             "portion": 1.0}).json()
        second = client.post("/whatif", json={
            "profile": first["after_profile"],
            "food_code": food.food_code, "portion": 1.0}).json()
        assert second["before_total"] == pytest.approx(first["after_total"], abs=1e-9)

    def test_does_not_mutate_store(self, client):
        before = client.get("/users/2/hei").json()["total"]
        client.post("/whatif", json={"seqn": 2, "food_code": 99990, "portion": 1.0})
        after = client.get("/users/2/hei").json()["total"]
        assert before == after


class TestUserStore:
    def test_post_then_score(self, client):
        payload = {
            "seqn": 777001, "age_years": 33, "sex": "male", "race_eth": "1",
            "education": "4", "income_ratio": 2.0, "bmi": 24.0,
            "flag_diabetes": False, "flag_cvd": False, "exclusions": [],
            "intake": {"energy_kcal": 2000, "f_wholegrain_oz": 3.0},
        }
        resp = client.post("/users", json=payload)
        assert resp.status_code == 200
        body = client.get("/users/777001/hei").json()
        assert body["components"]["whole_grains"]["points"] == pytest.approx(10.0)

    def test_duplicate_rejected(self, client):
        payload = {
            "seqn": 777002, "age_years": 33, "sex": "male", "bmi": 24.0,
            "flag_diabetes": False, "flag_cvd": False,
            "intake": {"energy_kcal": 1800},
        }
        assert client.post("/users", json=payload).status_code == 200
        resp = client.post("/users", json=payload)
        assert resp.status_code == 409
        assert resp.json()["code"] == "duplicate_user"

    def test_append_file_written(self, client, service_state):
        assert service_state.append_path.exists()
        lines = service_state.append_path.read_text().strip().splitlines()
        assert any(json.loads(ln)["seqn"] == 777001 for ln in lines)


class TestFoodSearchAndEvaluate:
    def test_search_shape(self, client):
        body = client.get("/foods/search", params={"q": "whole grains", "k": 5}).json()
        assert len(body["results"]) == 5
        assert {"food_code", "description", "similarity"} <= set(body["results"][0])

    def test_search_invalid_k(self, client):
        resp = client.get("/foods/search", params={"q": "x", "k": 0})
        assert resp.status_code == 422
        assert resp.json()["code"] == "invalid_k"

    def test_evaluate_endpoint(self, client):
        body = client.post("/evaluate", json={"seed": 5, "ratio": 0.8}).json()
        assert body["n_train"] + body["n_test"] == body["n_total"]
        assert body["mean_delta"] >= 0.0
