"""Intake-modification simulation, utility ranking, and plan assembly.

Each retrieved food is evaluated as a hypothetical change to the user's
intake: the projected score change and a health/energy constraint score
combine into a linear utility, candidates are ranked by it, and a greedy
pass accepts the best modifications while re-scoring against the running
profile so a saturated component is never double-counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .config import PipelineConfig
from .corpus import FoodIndex
from .hei import DEFAULT_STANDARDS, HeiScore, ScoringStandard, mean_scores, score_hei
from .ingest import (
    HIERARCHY_PAIRS,
    INTAKE_FIELDS,
    FoodItem,
    IntakeProfile,
    UserRecord,
    mean_profile,
)
from .retrieval import ScoredFood

MODE_ADD = "ADD"
MODE_SWAP = "SWAP"


@dataclass(frozen=True, slots=True)
class Modification:
    food_code: int
    mode: str = MODE_ADD
    portion_factor: float = 1.0
    swap_base: int | None = None


@dataclass(frozen=True)
class Candidate:
    food_code: int
    similarity: float
    delta_h: float
    component_deltas: dict[str, float]
    constraint: float
    utility: float
    best_portion: float
    portion_deltas: dict[float, float]

    def as_dict(self) -> dict:
        return {
            "food_code": self.food_code,
            "similarity": self.similarity,
            "delta_h": self.delta_h,
            "component_deltas": self.component_deltas,
            "constraint": self.constraint,
            "utility": self.utility,
            "best_portion": self.best_portion,
            "portion_deltas": {repr(p): d for p, d in self.portion_deltas.items()},
        }


@dataclass(frozen=True)
class PlanStep:
    food_code: int
    description: str
    mode: str
    portion: float
    delta_h: float
    component_deltas: dict[str, float]


@dataclass(frozen=True)
class Plan:
    seqn: int
    steps: tuple[PlanStep, ...]
    baseline_hei: HeiScore
    final_hei: HeiScore
    final_intake: IntakeProfile

    @property
    def total_improvement(self) -> float:
        return self.final_hei.total - self.baseline_hei.total


def apply_modification(x: IntakeProfile, food: FoodItem, m: Modification,
                       base: FoodItem | None = None) -> IntakeProfile:
    """Project a profile under an added (or swapped) scaled serving.

    ADD shifts every shared quantity by portion*food; SWAP shifts by
    portion*(food - base) clamped at zero. Whole/total hierarchy fields
    are re-clamped afterwards.
    """
    if m.mode == MODE_SWAP and base is None:
        raise ValueError("SWAP modification requires a base food")
    if m.mode not in (MODE_ADD, MODE_SWAP):
        raise ValueError(f"unknown modification mode: {m.mode}")
    s = m.portion_factor
    values: dict[str, float] = {}
    for fld in INTAKE_FIELDS:
        delta = getattr(food, fld, 0.0)
        if m.mode == MODE_SWAP:
            delta -= getattr(base, fld, 0.0)
        new = getattr(x, fld) + s * delta
        values[fld] = new if new > 0.0 else 0.0
    for child, parent in HIERARCHY_PAIRS:
        if values[child] > values[parent]:
            values[child] = values[parent]
    return IntakeProfile(**values)


def delta_hei(x: IntakeProfile, food: FoodItem, m: Modification,
              standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS,
              base: FoodItem | None = None) -> tuple[float, dict[str, float]]:
    """Projected total and per-component score change from one modification."""
    before = score_hei(x, standards)
    after = score_hei(apply_modification(x, food, m, base), standards)
    deltas = {
        cid: after.components[cid].points - before.components[cid].points
        for cid in before.components
    }
    return after.total - before.total, deltas


def constraint_score(user: UserRecord, food: FoodItem, x: IntakeProfile,
                     x_new: IntakeProfile, cfg: PipelineConfig) -> float:
    """Health-compatibility plus energy-departure penalty, in [-2, 0]."""
    health = 0.0
    if user.flag_diabetes and food.added_sugars_g > cfg.sugar_g_max:
        health -= 0.5
    if user.flag_cvd and food.sodium_mg > cfg.sodium_mg_max:
        health -= 0.5
    health = max(health, -1.0)
    cap = cfg.energy_frac * max(x.energy_kcal, 500.0)
    energy_penalty = -min(1.0, abs(x_new.energy_kcal - x.energy_kcal) / cap)
    return health + energy_penalty


def rank_candidates(user: UserRecord, hei: HeiScore, retrieved: list[ScoredFood],
                    index: FoodIndex, cfg: PipelineConfig,
                    standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS,
                    ) -> list[Candidate]:
    """Evaluate every portion of every retrieved food and sort by utility.

    Ordering: utility desc, then delta_h desc, then food_code asc. The best
    portion for a food is the utility argmax, smaller portion on ties.
    """
    x = user.intake
    before = score_hei(x, standards)
    candidates: list[Candidate] = []
    for scored in retrieved:
        food = index.item(scored.food_code)
        best = None
        portion_deltas: dict[float, float] = {}
        for s in cfg.portions:
            m = Modification(food.food_code, MODE_ADD, s)
            x_new = apply_modification(x, food, m)
            after = score_hei(x_new, standards)
            dh = after.total - before.total
            portion_deltas[s] = dh
            c = constraint_score(user, food, x, x_new, cfg)
            j = cfg.alpha * dh + cfg.beta * c
            if best is None or j > best[0]:
                comp_deltas = {
                    cid: after.components[cid].points - before.components[cid].points
                    for cid in before.components
                }
                best = (j, dh, c, s, comp_deltas)
        j, dh, c, s, comp_deltas = best
        candidates.append(Candidate(
            food_code=food.food_code,
            similarity=scored.similarity,
            delta_h=dh,
            component_deltas=comp_deltas,
            constraint=c,
            utility=j,
            best_portion=s,
            portion_deltas=portion_deltas,
        ))
    candidates.sort(key=lambda c: (-c.utility, -c.delta_h, c.food_code))
    return candidates


def _score_days(days: Sequence[IntakeProfile],
                standards: Sequence[ScoringStandard]) -> HeiScore:
    return mean_scores([score_hei(d, standards) for d in days])


def build_plan(user: UserRecord, ranked: list[Candidate], index: FoodIndex,
               cfg: PipelineConfig,
               standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS) -> Plan:
    """Greedy acceptance over the ranked list with re-scoring.

    A candidate is accepted only if, applied at its best portion to the
    RUNNING profile, it still improves the score by more than eps and the
    cumulative energy departure stays within the configured fraction of
    baseline energy. Multi-day users are scored day-by-day and averaged at
    every step so the baseline and final scores stay on the same footing.
    """
    days: list[IntakeProfile] = list(user.days) or [user.intake]
    baseline = _score_days(days, standards)
    baseline_energy = sum(d.energy_kcal for d in days) / len(days)
    running_days = days
    running_score = baseline
    steps: list[PlanStep] = []
    for cand in ranked:
        if len(steps) >= cfg.m_max:
            break
        food = index.item(cand.food_code)
        m = Modification(cand.food_code, MODE_ADD, cand.best_portion)
        new_days = [apply_modification(d, food, m) for d in running_days]
        new_score = _score_days(new_days, standards)
        dh = new_score.total - running_score.total
        if dh <= cfg.eps:
            continue
        new_energy = sum(d.energy_kcal for d in new_days) / len(new_days)
        if abs(new_energy - baseline_energy) > cfg.energy_frac * baseline_energy:
            continue
        steps.append(PlanStep(
            food_code=food.food_code,
            description=food.description,
            mode=MODE_ADD,
            portion=cand.best_portion,
            delta_h=dh,
            component_deltas={
                cid: new_score.components[cid].points - running_score.components[cid].points
                for cid in running_score.components
            },
        ))
        running_days = new_days
        running_score = new_score
    return Plan(
        seqn=user.seqn,
        steps=tuple(steps),
        baseline_hei=baseline,
        final_hei=running_score,
        final_intake=mean_profile(running_days),
    )


@dataclass(frozen=True)
class PipelineResult:
    query_text: str
    deficit_components: tuple[str, ...]
    ranked: list[Candidate]
    plan: Plan


def recommend_for_user(user: UserRecord, index: FoodIndex, cfg: PipelineConfig,
                       standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS,
                       ) -> PipelineResult:
    """Full per-user pipeline: query, search, diversify, filter, rank, plan."""
    from .retrieval import build_query, filter_exclusions, mmr_rerank, search

    hei = score_hei(user.intake, standards)
    query = build_query(user, hei, index.scheme_id if index.scheme_id != "external"
                        else "hash-v1", index.dim)
    if len(index) == 0:
        ranked: list[Candidate] = []
    else:
        k_r = min(cfg.k_retrieve, len(index))
        retrieved = search(index, query.vector, k_r)
        k_m = min(cfg.k_mmr, len(retrieved))
        diversified = mmr_rerank(retrieved, index, query.vector, cfg.mmr_lambda, k_m)
        allowed = filter_exclusions(diversified, index, user.exclusions)
        ranked = rank_candidates(user, hei, allowed, index, cfg, standards)
    plan = build_plan(user, ranked, index, cfg, standards)
    return PipelineResult(
        query_text=query.query_text,
        deficit_components=query.deficit_components,
        ranked=ranked,
        plan=plan,
    )
