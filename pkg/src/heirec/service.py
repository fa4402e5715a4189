"""HTTP gateway exposing scoring, recommendation, what-if, and evaluation.

The person store is the loaded persons file plus in-memory additions
persisted to an append-only JSONL file; the index is immutable after
load. Every error response carries a machine-readable {code, message}
body.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import PipelineConfig
from .corpus import FoodIndex, embed_text, load_index
from .errors import ParseError, SchemaError
from .evaluation import run_evaluation
from .explainer import explain_plan
from .hei import DEFAULT_STANDARDS, ScoringStandard, score_hei, score_user
from .ingest import (
    INTAKE_FIELDS,
    IntakeProfile,
    UserRecord,
    apply_quality_filter,
    link_and_average,
    read_persons_csv,
)
from .recommender import (
    MODE_ADD,
    MODE_SWAP,
    Modification,
    apply_modification,
    delta_hei,
    recommend_for_user,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class ServiceConfig:
    persons_path: str
    index_dir: str
    config_path: str | None = None
    standards_path: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    llm_enabled: bool = False
    app_dir: str | None = None
    users_append_path: str | None = None


@dataclass
class ServiceState:
    cfg: PipelineConfig
    index: FoodIndex
    standards: Sequence[ScoringStandard]
    users: dict[int, UserRecord] = field(default_factory=dict)
    append_path: Path | None = None
    app_dir: str | None = None

    def user(self, seqn: int) -> UserRecord:
        user = self.users.get(seqn)
        if user is None:
            raise ApiError(404, "unknown_user", f"no user with seqn {seqn}")
        return user


def _profile_from_json(data: dict) -> IntakeProfile:
    if not isinstance(data, dict):
        raise ApiError(422, "invalid_profile", "profile must be an object")
    values = {}
    for fld in INTAKE_FIELDS:
        raw = data.get(fld, 0.0)
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise ApiError(422, "invalid_profile", f"{fld} must be a number") from None
        if not math.isfinite(value) or value < 0:
            raise ApiError(422, "invalid_profile", f"{fld} must be finite and non-negative")
        values[fld] = value
    return IntakeProfile(**values)


def _user_from_json(data: dict) -> UserRecord:
    try:
        seqn = int(data["seqn"])
        intake = _profile_from_json(data["intake"])
        days_raw = data.get("days")
        days = tuple(_profile_from_json(d) for d in days_raw) if days_raw else (intake,)
        return UserRecord(
            seqn=seqn,
            age_years=float(data["age_years"]),
            sex=str(data["sex"]),
            race_eth=str(data.get("race_eth", "unknown")),
            education=str(data.get("education", "unknown")),
            income_ratio=float(data.get("income_ratio", 0.0)),
            bmi=float(data["bmi"]),
            flag_diabetes=bool(data["flag_diabetes"]),
            flag_cvd=bool(data["flag_cvd"]),
            exclusions=frozenset(data.get("exclusions", [])),
            intake=intake,
            days=days,
        )
    except ApiError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ApiError(422, "invalid_user", f"bad user record: {exc}") from exc


def _user_to_json(user: UserRecord) -> dict:
    return {
        "seqn": user.seqn,
        "age_years": user.age_years,
        "sex": user.sex,
        "race_eth": user.race_eth,
        "education": user.education,
        "income_ratio": user.income_ratio,
        "bmi": user.bmi,
        "flag_diabetes": user.flag_diabetes,
        "flag_cvd": user.flag_cvd,
        "exclusions": sorted(user.exclusions),
        "intake": user.intake.as_dict(),
        "days": [d.as_dict() for d in user.days],
    }


def load_state(service_cfg: ServiceConfig) -> ServiceState:
    """Load config, index, and persons; raises on unloadable inputs."""
    cfg = (PipelineConfig.from_file(service_cfg.config_path)
           if service_cfg.config_path else PipelineConfig())
    cfg = replace(cfg, llm=replace(cfg.llm, enabled=service_cfg.llm_enabled))
    standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS
    if service_cfg.standards_path:
        from .hei import load_standards
        standards = load_standards(service_cfg.standards_path)
    index = load_index(service_cfg.index_dir)
    days, profiles = read_persons_csv(service_cfg.persons_path)
    users, _link = link_and_average(days, profiles)
    kept, _filt = apply_quality_filter(users)
    store = {u.seqn: u for u in kept}

    append_path = (Path(service_cfg.users_append_path) if service_cfg.users_append_path
                   else Path(service_cfg.persons_path).with_suffix(".extra.jsonl"))
    if append_path.exists():
        with open(append_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    user = _user_from_json(json.loads(line))
                    store[user.seqn] = user
    return ServiceState(cfg=cfg, index=index, standards=standards,
                        users=store, append_path=append_path)


def build_recommendation_payload(user: UserRecord, state: ServiceState, k: int) -> dict:
    result = recommend_for_user(user, state.index, state.cfg, state.standards)
    plan = result.plan
    hei = score_hei(user.intake, state.standards)
    recs, source = explain_plan(user, hei, plan, result.ranked, state.index, state.cfg)
    plan_codes = {s.food_code for s in plan.steps}
    alternatives = []
    for cand in result.ranked:
        if cand.food_code in plan_codes:
            continue
        if len(alternatives) >= k:
            break
        entry = cand.as_dict()
        entry["description"] = state.index.item(cand.food_code).description
        alternatives.append(entry)
    return {
        "seqn": user.seqn,
        "query_text": result.query_text,
        "deficit_components": list(result.deficit_components),
        "baseline_hei": score_user(user, state.standards).as_dict(),
        "plan": {
            "steps": [
                {
                    "food_code": s.food_code,
                    "description": s.description,
                    "mode": s.mode,
                    "portion": s.portion,
                    "delta_h": s.delta_h,
                    "component_deltas": s.component_deltas,
                }
                for s in plan.steps
            ],
            "baseline_total": plan.baseline_hei.total,
            "final_total": plan.final_hei.total,
            "total_improvement": plan.total_improvement,
            "final_intake": plan.final_intake.as_dict(),
        },
        "recommendations": [r.as_dict() for r in recs],
        "explainer": source,
        "alternatives": alternatives,
    }


def whatif_response(state: ServiceState, profile: IntakeProfile, food_code: int,
                    portion: float, mode: str, swap_base: int | None) -> dict:
    if portion not in state.cfg.portions:
        raise ApiError(422, "invalid_portion",
                       f"portion must be one of {list(state.cfg.portions)}")
    if mode not in (MODE_ADD, MODE_SWAP):
        raise ApiError(422, "invalid_mode", f"mode must be {MODE_ADD} or {MODE_SWAP}")
    if not state.index.has(food_code):
        raise ApiError(404, "unknown_food", f"no food with code {food_code}")
    base = None
    if mode == MODE_SWAP:
        if swap_base is None:
            raise ApiError(422, "missing_swap_base", "SWAP requires swap_base")
        if not state.index.has(swap_base):
            raise ApiError(404, "unknown_food", f"no food with code {swap_base}")
        base = state.index.item(swap_base)
    food = state.index.item(food_code)
    m = Modification(food_code, mode, portion, swap_base)
    dh, comp_deltas = delta_hei(profile, food, m, state.standards, base)
    after = apply_modification(profile, food, m, base)
    before_score = score_hei(profile, state.standards)
    return {
        "before_total": before_score.total,
        "after_total": before_score.total + dh,
        "delta_h": dh,
        "component_deltas": comp_deltas,
        "after_profile": after.as_dict(),
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="heirec gateway")

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/users/{seqn}/hei")
    def user_hei(seqn: int):
        user = state.user(seqn)
        payload = score_user(user, state.standards).as_dict()
        payload["seqn"] = seqn
        return payload

    @app.get("/users/{seqn}/recommendations")
    def user_recommendations(seqn: int, k: int = 5):
        if k < 0:
            raise ApiError(422, "invalid_k", "k must be >= 0")
        user = state.user(seqn)
        return build_recommendation_payload(user, state, k)

    @app.post("/users")
    async def add_user(request: Request):
        try:
            data = await request.json()
        except Exception:
            raise ApiError(422, "invalid_user", "body must be JSON") from None
        user = _user_from_json(data)
        if user.seqn in state.users:
            raise ApiError(409, "duplicate_user", f"seqn {user.seqn} already exists")
        state.users[user.seqn] = user
        if state.append_path is not None:
            with open(state.append_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(_user_to_json(user), sort_keys=True) + "\n")
        return {"status": "created", "seqn": user.seqn}

    @app.post("/whatif")
    async def whatif(request: Request):
        try:
            data = await request.json()
        except Exception:
            raise ApiError(422, "invalid_request", "body must be JSON") from None
        if not isinstance(data, dict):
            raise ApiError(422, "invalid_request", "body must be a JSON object")
        if "profile" in data and data["profile"] is not None:
            profile = _profile_from_json(data["profile"])
        elif "seqn" in data and data["seqn"] is not None:
            try:
                seqn = int(data["seqn"])
            except (TypeError, ValueError):
                raise ApiError(422, "invalid_request", "seqn must be an integer") from None
            profile = state.user(seqn).intake
        else:
            raise ApiError(422, "invalid_request", "provide seqn or profile")
        try:
            food_code = int(data["food_code"])
        except (KeyError, TypeError, ValueError):
            raise ApiError(422, "invalid_request", "food_code must be an integer") from None
        try:
            portion = float(data.get("portion", 1.0))
        except (TypeError, ValueError):
            raise ApiError(422, "invalid_portion", "portion must be a number") from None
        mode = str(data.get("mode", MODE_ADD)).upper()
        swap_base = data.get("swap_base")
        swap_base = int(swap_base) if swap_base is not None else None
        return whatif_response(state, profile, food_code, portion, mode, swap_base)

    @app.get("/foods/search")
    def foods_search(q: str = "", k: int = 10):
        if k < 1:
            raise ApiError(422, "invalid_k", "k must be >= 1")
        if len(state.index) == 0:
            return {"results": []}
        from .retrieval import search

        vector = embed_text(q, state.index.dim)
        results = search(state.index, vector, min(k, len(state.index)))
        return {
            "results": [
                {
                    "food_code": r.food_code,
                    "description": state.index.item(r.food_code).description,
                    "similarity": r.similarity,
                }
                for r in results
            ]
        }

    @app.post("/evaluate")
    async def evaluate(request: Request):
        try:
            data = await request.json()
        except Exception:
            raise ApiError(422, "invalid_request", "body must be JSON") from None
        seed = int(data.get("seed", 0))
        ratio = float(data.get("ratio", state.cfg.split_ratio))
        users = sorted(state.users.values(), key=lambda u: u.seqn)
        if len(users) < 2:
            raise ApiError(422, "too_few_users", "need at least 2 users to evaluate")
        try:
            report = run_evaluation(users, state.index, state.cfg, seed,
                                    state.standards, ratio=ratio)
        except ValueError as exc:
            raise ApiError(422, "invalid_request", str(exc)) from exc
        return report.as_dict()

    if state.app_dir and Path(state.app_dir).is_dir():
        app.mount("/app", StaticFiles(directory=state.app_dir, html=True), name="app")
    return app


def serve(service_cfg: ServiceConfig):  # pragma: no cover - exercised manually
    """Load data and run the HTTP service (blocking)."""
    import uvicorn

    try:
        state = load_state(service_cfg)
    except (OSError, ParseError, SchemaError, ValueError) as exc:
        raise SystemExit(f"startup failed: {exc}") from exc
    state.app_dir = service_cfg.app_dir
    app = create_app(state)
    uvicorn.run(app, host=service_cfg.host, port=service_cfg.port, log_level="info")
