"""Grounded natural-language explanations for recommendation plans.

The generation model only ever sees the retrieved candidate set and must
answer in strict JSON naming codes from that set; anything else is
rejected and replaced by the deterministic template explanation. Score
deltas shown to users are always copied from the recommender, never taken
from model output.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from typing import Sequence

import requests

from .config import PipelineConfig
from .corpus import FoodIndex, render_food_text
from .errors import ConfigError, GroundingError, TransportError
from .hei import COMPONENT_IDS, STANDARD_BY_ID, HeiScore
from .ingest import UserRecord
from .recommender import Candidate, Plan

SYSTEM_TEMPLATE = (
    "You are a nutrition assistant. Recommend foods ONLY from the candidate "
    "list in the user message, identified by their food_code values. Respond "
    "with strict JSON matching this schema and nothing else:\n"
    '{"recommendations": [{"food_code": <int from the candidate list>, '
    '"portion": <one of the allowed portions>, "rationale": <short string>, '
    '"cited_components": [<component ids from the table>]}]}\n'
    "Do not invent foods, codes, portions, or score numbers."
)


# Outbound requests share a bounded in-flight pool per configured limit.
_inflight_pools: dict[int, threading.BoundedSemaphore] = {}
_inflight_lock = threading.Lock()


def _inflight_pool(limit: int) -> threading.BoundedSemaphore:
    limit = max(1, limit)
    with _inflight_lock:
        pool = _inflight_pools.get(limit)
        if pool is None:
            pool = threading.BoundedSemaphore(limit)
            _inflight_pools[limit] = pool
        return pool


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    allowed_codes: frozenset[int]
    allowed_portions: tuple[float, ...]
    deltas_by_code: dict[int, dict[float, float]]


@dataclass(frozen=True)
class GroundedRecommendation:
    food_code: int
    portion: float
    rationale: str
    cited_components: tuple[str, ...]
    anticipated_delta: float

    def as_dict(self) -> dict:
        return {
            "food_code": self.food_code,
            "portion": self.portion,
            "rationale": self.rationale,
            "cited_components": list(self.cited_components),
            "anticipated_delta": self.anticipated_delta,
        }


def assemble_prompt(user: UserRecord, hei: HeiScore, candidates: Sequence[Candidate],
                    index: FoodIndex, cfg: PipelineConfig) -> PromptBundle:
    """Deterministic prompt over the candidate set; raises on an empty set."""
    candidates = list(candidates)
    if not candidates:
        raise ValueError("cannot assemble a prompt over zero candidates")
    profile_summary = {
        "age_years": user.age_years,
        "sex": user.sex,
        "flag_diabetes": user.flag_diabetes,
        "flag_cvd": user.flag_cvd,
        "energy_kcal": user.intake.energy_kcal,
        "exclusions": sorted(user.exclusions),
    }
    component_table = [
        {"component": cid, "points": hei.components[cid].points,
         "max_points": hei.components[cid].max_points}
        for cid in COMPONENT_IDS
    ]
    candidate_block = []
    for cand in candidates:
        item = index.item(cand.food_code)
        candidate_block.append({
            "food_code": cand.food_code,
            "description": item.description,
            "text": render_food_text(item),
            "per_portion_delta_h": {repr(p): d for p, d in sorted(cand.portion_deltas.items())},
            "component_deltas": {k: v for k, v in sorted(cand.component_deltas.items())
                                 if v != 0.0},
        })
    user_text = json.dumps({
        "profile": profile_summary,
        "hei_total": hei.total,
        "hei_components": component_table,
        "allowed_portions": list(cfg.portions),
        "candidates": candidate_block,
    }, sort_keys=True)
    return PromptBundle(
        system_text=SYSTEM_TEMPLATE,
        user_text=user_text,
        allowed_codes=frozenset(c.food_code for c in candidates),
        allowed_portions=tuple(cfg.portions),
        deltas_by_code={c.food_code: dict(c.portion_deltas) for c in candidates},
    )


def call_llm(bundle: PromptBundle, cfg: PipelineConfig,
             extra_user_message: str | None = None) -> str:
    """One chat-completion request; returns the first choice's content.

    Raises ConfigError before any request when the credential is missing,
    and TransportError on network failures or non-2xx responses.
    """
    api_key = os.environ.get(cfg.llm.api_key_env, "")
    if not api_key:
        raise ConfigError(f"missing credential: set {cfg.llm.api_key_env}")
    messages = [
        {"role": "system", "content": bundle.system_text},
        {"role": "user", "content": bundle.user_text},
    ]
    if extra_user_message:
        messages.append({"role": "user", "content": extra_user_message})
    url = cfg.llm.base_url.rstrip("/") + "/chat/completions"
    try:
        with _inflight_pool(cfg.llm.max_inflight):
            resp = requests.post(
                url,
                json={"model": cfg.llm.model, "temperature": cfg.llm.temperature,
                      "messages": messages},
                headers={"Authorization": f"Bearer {api_key}"},
                timeout=cfg.llm.timeout_s,
            )
    except requests.RequestException as exc:
        raise TransportError(f"completion request failed: {exc}") from exc
    if resp.status_code != 200:
        raise TransportError(f"completion endpoint returned HTTP {resp.status_code}")
    try:
        return resp.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise TransportError(f"malformed completion response: {exc}") from exc


def validate_grounding(raw: str, bundle: PromptBundle) -> list[GroundedRecommendation]:
    """Parse and police a model response against the allowed candidate set.

    Every cited food_code must be in the bundle, every portion in the
    allowed set, and every cited component a real component id. Duplicate
    food codes are rejected. Anticipated deltas are injected from the
    recommender's numbers for the cited portion.
    """
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, TypeError) as exc:
        raise GroundingError(f"response is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("recommendations"), list):
        raise GroundingError("response must be an object with a 'recommendations' list")
    recs = data["recommendations"]
    if not 1 <= len(recs) <= len(bundle.allowed_codes):
        raise GroundingError(
            f"expected between 1 and {len(bundle.allowed_codes)} recommendations, "
            f"got {len(recs)}")
    out: list[GroundedRecommendation] = []
    seen: set[int] = set()
    for entry in recs:
        if not isinstance(entry, dict):
            raise GroundingError("each recommendation must be an object")
        code = entry.get("food_code")
        if not isinstance(code, int) or isinstance(code, bool):
            raise GroundingError(f"food_code must be an integer, got {code!r}")
        if code not in bundle.allowed_codes:
            raise GroundingError(f"food_code {code} is not in the allowed candidate set")
        if code in seen:
            raise GroundingError(f"food_code {code} recommended twice")
        seen.add(code)
        portion = entry.get("portion")
        if not isinstance(portion, (int, float)) or isinstance(portion, bool) \
                or float(portion) not in bundle.allowed_portions:
            raise GroundingError(f"portion {portion!r} is not in the allowed set "
                                 f"{list(bundle.allowed_portions)}")
        portion = float(portion)
        rationale = entry.get("rationale")
        if not isinstance(rationale, str) or not rationale.strip():
            raise GroundingError("rationale must be a non-empty string")
        cited = entry.get("cited_components", [])
        if not isinstance(cited, list) or any(c not in COMPONENT_IDS for c in cited):
            raise GroundingError(f"cited_components contains unknown names: {cited!r}")
        out.append(GroundedRecommendation(
            food_code=code,
            portion=portion,
            rationale=rationale.strip(),
            cited_components=tuple(cited),
            anticipated_delta=bundle.deltas_by_code[code][portion],
        ))
    return out


def fallback_explain(plan: Plan) -> list[GroundedRecommendation]:
    """Deterministic template explanation, one entry per plan step.

    The rationale names the step's largest-magnitude component change and
    its score gain; an empty plan yields an empty list. Output for any
    non-empty plan passes grounding validation against its own candidates.
    """
    out: list[GroundedRecommendation] = []
    for step in plan.steps:
        top_component = max(
            COMPONENT_IDS,
            key=lambda cid: (abs(step.component_deltas.get(cid, 0.0)),
                             -COMPONENT_IDS.index(cid)),
        )
        display = STANDARD_BY_ID[top_component].display
        rationale = (f"Adds {step.description}: improves {display} "
                     f"(+{step.delta_h:.2f} HEI points)")
        out.append(GroundedRecommendation(
            food_code=step.food_code,
            portion=step.portion,
            rationale=rationale,
            cited_components=(top_component,),
            anticipated_delta=step.delta_h,
        ))
    return out


def explain_plan(user: UserRecord, hei: HeiScore, plan: Plan,
                 candidates: Sequence[Candidate], index: FoodIndex,
                 cfg: PipelineConfig) -> tuple[list[GroundedRecommendation], str]:
    """Explain a plan, via the model when enabled, else the template.

    At most cfg.llm.max_retries model calls are made (the retry appends the
    grounding violation for one repair attempt); any failure falls back to
    the deterministic template. Returns (recommendations, source) where
    source is "llm" or "fallback".
    """
    if not plan.steps or not candidates or not cfg.llm.enabled:
        return fallback_explain(plan), "fallback"
    bundle = assemble_prompt(user, hei, candidates, index, cfg)
    violation: str | None = None
    for _attempt in range(max(1, cfg.llm.max_retries)):
        try:
            raw = call_llm(bundle, cfg, extra_user_message=violation)
            return validate_grounding(raw, bundle), "llm"
        except GroundingError as exc:
            violation = (f"Your previous response was rejected: {exc}. "
                         f"Reply again with valid JSON using only the listed food codes.")
        except (TransportError, ConfigError):
            break
    return fallback_explain(plan), "fallback"
