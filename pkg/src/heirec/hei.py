"""HEI-2020 component and total scoring.

The 13-component cut-point table ships as editable configuration; the
defaults below transcribe the 2020 standard. Adequacy components score
linearly up to a density standard, moderation components score linearly
down between two cut points, and the fatty-acid component scores the
(MUFA+PUFA)/SFA ratio on the same two-cut-point rule.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .ingest import IntakeProfile, PersonDayRecord, UserRecord

ADEQUACY = "adequacy"
MODERATION = "moderation"
RATIO = "ratio"

PER_1000_KCAL = "per_1000_kcal"
PERCENT_ENERGY = "percent_energy"
RATIO_BASIS = "ratio"


class _ZeroEnergy:
    """Distinguished density value for a zero-energy day."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "ZERO_ENERGY"


ZERO_ENERGY = _ZeroEnergy()

# Atwater energy factors for the percent-energy components.
KCAL_PER_G_CARB = 4.0
KCAL_PER_G_FAT = 9.0


@dataclass(frozen=True, slots=True)
class ScoringStandard:
    component_id: str
    display: str
    kind: str                 # adequacy | moderation | ratio
    max_points: float         # 5 or 10
    basis: str                # per_1000_kcal | percent_energy | ratio
    std_for_max: float        # value earning max_points
    std_for_min: float        # value earning 0 points
    field: str | None = None  # source intake field (None for the ratio)
    field_scale: float = 1.0  # unit conversion applied to the field


DEFAULT_STANDARDS: tuple[ScoringStandard, ...] = (
    ScoringStandard("total_fruits", "Total Fruits", ADEQUACY, 5, PER_1000_KCAL,
                    0.8, 0.0, "f_totfruit_cup"),
    ScoringStandard("whole_fruits", "Whole Fruits", ADEQUACY, 5, PER_1000_KCAL,
                    0.4, 0.0, "f_wholefruit_cup"),
    ScoringStandard("total_vegetables", "Total Vegetables", ADEQUACY, 5, PER_1000_KCAL,
                    1.1, 0.0, "f_totveg_cup"),
    ScoringStandard("greens_and_beans", "Greens and Beans", ADEQUACY, 5, PER_1000_KCAL,
                    0.2, 0.0, "f_greensbeans_cup"),
    ScoringStandard("whole_grains", "Whole Grains", ADEQUACY, 10, PER_1000_KCAL,
                    1.5, 0.0, "f_wholegrain_oz"),
    ScoringStandard("dairy", "Dairy", ADEQUACY, 10, PER_1000_KCAL,
                    1.3, 0.0, "f_dairy_cup"),
    ScoringStandard("total_protein_foods", "Total Protein Foods", ADEQUACY, 5, PER_1000_KCAL,
                    2.5, 0.0, "f_totprotein_oz"),
    ScoringStandard("seafood_plant_proteins", "Seafood and Plant Proteins", ADEQUACY, 5,
                    PER_1000_KCAL, 0.8, 0.0, "f_seaplant_oz"),
    ScoringStandard("fatty_acids", "Fatty Acids", RATIO, 10, RATIO_BASIS, 2.5, 1.2),
    ScoringStandard("refined_grains", "Refined Grains", MODERATION, 10, PER_1000_KCAL,
                    1.8, 4.3, "f_refinedgrain_oz"),
    ScoringStandard("sodium", "Sodium", MODERATION, 10, PER_1000_KCAL,
                    1.1, 2.0, "sodium_mg", field_scale=0.001),
    ScoringStandard("added_sugars", "Added Sugars", MODERATION, 10, PERCENT_ENERGY,
                    6.5, 26.0, "added_sugars_g", field_scale=KCAL_PER_G_CARB),
    ScoringStandard("saturated_fats", "Saturated Fats", MODERATION, 10, PERCENT_ENERGY,
                    8.0, 16.0, "sfa_g", field_scale=KCAL_PER_G_FAT),
)

COMPONENT_IDS: tuple[str, ...] = tuple(s.component_id for s in DEFAULT_STANDARDS)
STANDARD_BY_ID: dict[str, ScoringStandard] = {s.component_id: s for s in DEFAULT_STANDARDS}


def load_standards(path: str | Path) -> tuple[ScoringStandard, ...]:
    """Load a cut-point override file: {component_id: {kind, max_points, ...}}.

    Field wiring (which intake column feeds which component) is fixed;
    only the scoring parameters are recalibratable.
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    out = []
    for default in DEFAULT_STANDARDS:
        entry = data.get(default.component_id, {})
        out.append(ScoringStandard(
            component_id=default.component_id,
            display=entry.get("display", default.display),
            kind=entry.get("kind", default.kind),
            max_points=float(entry.get("max_points", default.max_points)),
            basis=entry.get("basis", default.basis),
            std_for_max=float(entry.get("std_for_max", default.std_for_max)),
            std_for_min=float(entry.get("std_for_min", default.std_for_min)),
            field=default.field,
            field_scale=default.field_scale,
        ))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class ComponentScore:
    value: float      # density, percent energy, or ratio
    points: float
    max_points: float


@dataclass(frozen=True, slots=True)
class HeiScore:
    total: float
    components: dict[str, ComponentScore]

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "components": {
                cid: {
                    "value": None if not math.isfinite(c.value) else c.value,
                    "points": c.points,
                    "max_points": c.max_points,
                }
                for cid, c in self.components.items()
            },
        }


def density(quantity: float, energy_kcal: float):
    """Amount per 1000 kcal; ZERO_ENERGY when the day has no energy."""
    if quantity < 0 or energy_kcal < 0:
        raise ValueError("density inputs must be non-negative")
    if energy_kcal == 0:
        return ZERO_ENERGY
    return quantity * 1000.0 / energy_kcal


def score_component(value, standard: ScoringStandard) -> float:
    """Points earned by one component at the given density/ratio value."""
    if value is ZERO_ENERGY:
        return 0.0
    if standard.kind == ADEQUACY:
        if value >= standard.std_for_max:
            return standard.max_points
        return standard.max_points * (value / standard.std_for_max)
    # moderation and ratio share the two-cut-point linear rule
    span = standard.std_for_min - standard.std_for_max
    t = (standard.std_for_min - value) / span
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return standard.max_points
    return standard.max_points * t


def _component_value(x: IntakeProfile, standard: ScoringStandard):
    if standard.basis == RATIO_BASIS:
        unsat = x.mufa_g + x.pufa_g
        if x.sfa_g > 0:
            return unsat / x.sfa_g
        # zero saturated fat: any unsaturated intake earns full points,
        # none earns zero
        return math.inf if unsat > 0 else 0.0
    if standard.basis == PERCENT_ENERGY:
        if x.energy_kcal == 0:
            return ZERO_ENERGY
        grams = getattr(x, standard.field)
        return 100.0 * grams * standard.field_scale / x.energy_kcal
    quantity = getattr(x, standard.field) * standard.field_scale
    return density(quantity, x.energy_kcal)


def score_hei(x: IntakeProfile,
              standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS) -> HeiScore:
    """Total and component scores for one intake profile."""
    if x.energy_kcal == 0:
        comps = {s.component_id: ComponentScore(0.0, 0.0, s.max_points) for s in standards}
        return HeiScore(0.0, comps)
    comps: dict[str, ComponentScore] = {}
    total = 0.0
    for standard in standards:
        value = _component_value(x, standard)
        points = score_component(value, standard)
        comps[standard.component_id] = ComponentScore(
            0.0 if value is ZERO_ENERGY else float(value), points, standard.max_points)
        total += points
    return HeiScore(total, comps)


def mean_scores(scores: Sequence[HeiScore]) -> HeiScore:
    """Component-wise arithmetic mean; total re-summed from mean components."""
    if not scores:
        raise ValueError("mean_scores requires at least one score")
    if len(scores) == 1:
        return scores[0]
    n = len(scores)
    comps: dict[str, ComponentScore] = {}
    total = 0.0
    for cid, first in scores[0].components.items():
        points = sum(s.components[cid].points for s in scores) / n
        value = sum(s.components[cid].value for s in scores) / n
        comps[cid] = ComponentScore(value, points, first.max_points)
        total += points
    return HeiScore(total, comps)


def score_user(user_or_days,
               standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS) -> HeiScore:
    """Score a user: per-day scores averaged when multiple recall days exist."""
    if isinstance(user_or_days, UserRecord):
        profiles: Iterable = user_or_days.days or (user_or_days.intake,)
    elif isinstance(user_or_days, IntakeProfile):
        profiles = (user_or_days,)
    else:
        profiles = [
            d.intake if isinstance(d, PersonDayRecord) else d for d in user_or_days
        ]
    profiles = list(profiles)
    if not profiles:
        raise ValueError("at least one recall day is required")
    return mean_scores([score_hei(p, standards) for p in profiles])
