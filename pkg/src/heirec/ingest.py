"""Person-day intake and food-corpus ingestion.

Parses the normalized persons/foods CSV schemas, links recall days to
profiles by seqn, averages multi-day intakes, applies the completeness
filter, and generates deterministic synthetic populations for desk-scale
runs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import ParseError, SchemaError

# Quantitative intake fields, in persons.csv column order.
INTAKE_FIELDS: tuple[str, ...] = (
    "energy_kcal", "protein_g", "carb_g", "fat_g", "fiber_g",
    "sodium_mg", "potassium_mg", "sfa_g", "mufa_g", "pufa_g",
    "added_sugars_g",
    "f_totfruit_cup", "f_wholefruit_cup", "f_totveg_cup", "f_greensbeans_cup",
    "f_wholegrain_oz", "f_dairy_cup", "f_totprotein_oz", "f_seaplant_oz",
    "f_refinedgrain_oz",
)

# Per-serving quantity fields carried by a food row.
FOOD_QUANTITY_FIELDS: tuple[str, ...] = (
    "energy_kcal", "sodium_mg", "added_sugars_g", "sfa_g", "mufa_g", "pufa_g",
    "fiber_g",
    "f_totfruit_cup", "f_wholefruit_cup", "f_totveg_cup", "f_greensbeans_cup",
    "f_wholegrain_oz", "f_dairy_cup", "f_totprotein_oz", "f_seaplant_oz",
    "f_refinedgrain_oz",
)

# (child, parent) pairs that must satisfy child <= parent.
HIERARCHY_PAIRS: tuple[tuple[str, str], ...] = (
    ("f_wholefruit_cup", "f_totfruit_cup"),
    ("f_greensbeans_cup", "f_totveg_cup"),
    ("f_seaplant_oz", "f_totprotein_oz"),
)

PERSON_COLUMNS: tuple[str, ...] = (
    "seqn", "day", "age_years", "sex", "race_eth", "education", "income_ratio",
    "bmi", "flag_diabetes", "flag_cvd", "exclusions",
) + INTAKE_FIELDS

FOOD_COLUMNS: tuple[str, ...] = (
    "food_code", "description", "serving_desc", "tags",
) + FOOD_QUANTITY_FIELDS

# FPED reports added sugars in teaspoon equivalents; grams are derived when
# only the optional tsp column is populated.
GRAMS_PER_TSP_EQ = 4.2
OPTIONAL_TSP_COLUMN = "added_sugars_tsp"

_TRUE = {"1", "true", "t", "yes", "y"}
_FALSE = {"0", "false", "f", "no", "n"}
_UNKNOWN = {"", "unknown", "na", "nan", "none"}


@dataclass(frozen=True, slots=True)
class IntakeProfile:
    """Daily intake vector: energy, nutrients, and food-pattern equivalents."""

    energy_kcal: float = 0.0
    protein_g: float = 0.0
    carb_g: float = 0.0
    fat_g: float = 0.0
    fiber_g: float = 0.0
    sodium_mg: float = 0.0
    potassium_mg: float = 0.0
    sfa_g: float = 0.0
    mufa_g: float = 0.0
    pufa_g: float = 0.0
    added_sugars_g: float = 0.0
    f_totfruit_cup: float = 0.0
    f_wholefruit_cup: float = 0.0
    f_totveg_cup: float = 0.0
    f_greensbeans_cup: float = 0.0
    f_wholegrain_oz: float = 0.0
    f_dairy_cup: float = 0.0
    f_totprotein_oz: float = 0.0
    f_seaplant_oz: float = 0.0
    f_refinedgrain_oz: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {f: getattr(self, f) for f in INTAKE_FIELDS}


@dataclass(frozen=True)
class PersonDayRecord:
    """One recall day for one respondent; extra CSV columns ride along untouched."""

    seqn: int
    day: int
    intake: IntakeProfile
    extras: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class RawProfileRow:
    """Pre-filter demographics; missing values are None / 'unknown' sentinels."""

    seqn: int
    age_years: float | None
    sex: str
    race_eth: str
    education: str
    income_ratio: float | None
    bmi: float | None
    flag_diabetes: bool | None
    flag_cvd: bool | None
    exclusions: frozenset[str]


@dataclass(frozen=True)
class UserRecord:
    seqn: int
    age_years: float | None
    sex: str
    race_eth: str
    education: str
    income_ratio: float | None
    bmi: float | None
    flag_diabetes: bool | None
    flag_cvd: bool | None
    exclusions: frozenset[str]
    intake: IntakeProfile
    days: tuple[IntakeProfile, ...]


@dataclass(frozen=True)
class FoodItem:
    """One FPED-mapped food with per-serving quantities."""

    food_code: int
    description: str
    serving_desc: str
    tags: frozenset[str]
    energy_kcal: float = 0.0
    sodium_mg: float = 0.0
    added_sugars_g: float = 0.0
    sfa_g: float = 0.0
    mufa_g: float = 0.0
    pufa_g: float = 0.0
    fiber_g: float = 0.0
    f_totfruit_cup: float = 0.0
    f_wholefruit_cup: float = 0.0
    f_totveg_cup: float = 0.0
    f_greensbeans_cup: float = 0.0
    f_wholegrain_oz: float = 0.0
    f_dairy_cup: float = 0.0
    f_totprotein_oz: float = 0.0
    f_seaplant_oz: float = 0.0
    f_refinedgrain_oz: float = 0.0

    def quantities(self) -> dict[str, float]:
        return {f: getattr(self, f) for f in FOOD_QUANTITY_FIELDS}


@dataclass
class LinkReport:
    linked: int = 0
    dropped_missing_profile: int = 0


@dataclass
class FilterReport:
    kept: int = 0
    excluded_by_reason: dict[str, int] = field(default_factory=dict)

    @property
    def excluded(self) -> int:
        return sum(self.excluded_by_reason.values())


def _open_source(source) -> Iterable[str]:
    if isinstance(source, (str, Path)):
        return open(source, newline="", encoding="utf-8")
    return source


def _parse_quantity(raw: str, line: int, column: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ParseError(f"line {line}: column {column}: not a number: {raw!r}",
                         line=line, column=column) from None
    if not math.isfinite(value):
        raise ParseError(f"line {line}: column {column}: non-finite value", line=line, column=column)
    if value < 0:
        raise ParseError(f"line {line}: column {column}: negative value {value}",
                         line=line, column=column)
    return value


def _parse_optional_float(raw: str) -> float | None:
    raw = (raw or "").strip()
    if raw.lower() in _UNKNOWN:
        return None
    try:
        value = float(raw)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _parse_optional_bool(raw: str) -> bool | None:
    raw = (raw or "").strip().lower()
    if raw in _TRUE:
        return True
    if raw in _FALSE:
        return False
    return None


def _parse_tags(raw: str) -> frozenset[str]:
    return frozenset(t.strip() for t in (raw or "").split(";") if t.strip())


def _check_columns(fieldnames, required: tuple[str, ...], what: str) -> None:
    missing = [c for c in required if c not in (fieldnames or ())]
    if missing:
        raise SchemaError(f"{what}: missing required columns: {', '.join(missing)}")


def _intake_from_row(row: dict[str, str], line: int) -> IntakeProfile:
    values: dict[str, float] = {}
    for col in INTAKE_FIELDS:
        raw = (row.get(col) or "").strip()
        if col == "added_sugars_g" and raw == "" and OPTIONAL_TSP_COLUMN in row:
            tsp = _parse_quantity((row.get(OPTIONAL_TSP_COLUMN) or "0").strip() or "0",
                                  line, OPTIONAL_TSP_COLUMN)
            values[col] = tsp * GRAMS_PER_TSP_EQ
            continue
        values[col] = _parse_quantity(raw, line, col)
    for child, parent in HIERARCHY_PAIRS:
        if values[child] > values[parent] + 1e-9:
            raise ParseError(
                f"line {line}: {child} ({values[child]}) exceeds {parent} ({values[parent]})",
                line=line, column=child)
    return IntakeProfile(**values)


def parse_person_rows(source) -> list[PersonDayRecord]:
    """Parse person-day rows from a persons.csv stream or path.

    Raises SchemaError when a required column is absent and ParseError
    (with line number) for malformed rows.
    """
    stream = _open_source(source)
    try:
        reader = csv.DictReader(stream)
        _check_columns(reader.fieldnames, PERSON_COLUMNS, "persons table")
        known = set(PERSON_COLUMNS) | {OPTIONAL_TSP_COLUMN}
        extra_cols = [c for c in (reader.fieldnames or []) if c not in known]
        records: list[PersonDayRecord] = []
        for line, row in enumerate(reader, start=2):
            if row.get(None):
                raise ParseError(f"line {line}: too many fields", line=line)
            try:
                seqn = int(row["seqn"])
            except (TypeError, ValueError):
                raise ParseError(f"line {line}: column seqn: not an integer", line=line,
                                 column="seqn") from None
            if seqn <= 0:
                raise ParseError(f"line {line}: column seqn: must be positive", line=line,
                                 column="seqn")
            try:
                day = int(row["day"])
            except (TypeError, ValueError):
                raise ParseError(f"line {line}: column day: not an integer", line=line,
                                 column="day") from None
            if day not in (1, 2):
                raise ParseError(f"line {line}: column day: must be 1 or 2", line=line,
                                 column="day")
            intake = _intake_from_row(row, line)
            extras = {c: (row.get(c) or "") for c in extra_cols}
            records.append(PersonDayRecord(seqn=seqn, day=day, intake=intake, extras=extras))
        return records
    finally:
        if isinstance(source, (str, Path)):
            stream.close()


def parse_profile_rows(source) -> list[RawProfileRow]:
    """Extract one demographic profile per seqn (first row wins)."""
    stream = _open_source(source)
    try:
        reader = csv.DictReader(stream)
        _check_columns(reader.fieldnames, PERSON_COLUMNS, "persons table")
        seen: set[int] = set()
        profiles: list[RawProfileRow] = []
        for line, row in enumerate(reader, start=2):
            try:
                seqn = int(row["seqn"])
            except (TypeError, ValueError):
                raise ParseError(f"line {line}: column seqn: not an integer", line=line,
                                 column="seqn") from None
            if seqn in seen:
                continue
            seen.add(seqn)
            profiles.append(RawProfileRow(
                seqn=seqn,
                age_years=_parse_optional_float(row.get("age_years", "")),
                sex=(row.get("sex") or "").strip().lower() or "unknown",
                race_eth=(row.get("race_eth") or "").strip() or "unknown",
                education=(row.get("education") or "").strip() or "unknown",
                income_ratio=_parse_optional_float(row.get("income_ratio", "")),
                bmi=_parse_optional_float(row.get("bmi", "")),
                flag_diabetes=_parse_optional_bool(row.get("flag_diabetes", "")),
                flag_cvd=_parse_optional_bool(row.get("flag_cvd", "")),
                exclusions=_parse_tags(row.get("exclusions", "")),
            ))
        return profiles
    finally:
        if isinstance(source, (str, Path)):
            stream.close()


def read_persons_csv(source) -> tuple[list[PersonDayRecord], list[RawProfileRow]]:
    """Single-file convenience: day records plus per-seqn profiles."""
    if isinstance(source, (str, Path)):
        days = parse_person_rows(source)
        profiles = parse_profile_rows(source)
    else:
        text = source.read()
        days = parse_person_rows(io.StringIO(text))
        profiles = parse_profile_rows(io.StringIO(text))
    return days, profiles


def mean_profile(profiles: Iterable[IntakeProfile]) -> IntakeProfile:
    profiles = list(profiles)
    n = len(profiles)
    if n == 0:
        raise ValueError("mean_profile requires at least one profile")
    if n == 1:
        return profiles[0]
    return IntakeProfile(**{
        f: sum(getattr(p, f) for p in profiles) / n for f in INTAKE_FIELDS
    })


def link_and_average(days: list[PersonDayRecord],
                     profiles: list[RawProfileRow]) -> tuple[list[UserRecord], LinkReport]:
    """Join day records to profiles on seqn; field-wise mean over recall days.

    Days whose seqn has no profile row are dropped and counted, not fatal.
    Output is sorted by seqn.
    """
    by_profile = {p.seqn: p for p in profiles}
    grouped: dict[int, list[PersonDayRecord]] = {}
    for rec in days:
        grouped.setdefault(rec.seqn, []).append(rec)

    report = LinkReport()
    users: list[UserRecord] = []
    for seqn in sorted(grouped):
        prof = by_profile.get(seqn)
        if prof is None:
            report.dropped_missing_profile += 1
            continue
        day_profiles = tuple(r.intake for r in sorted(grouped[seqn], key=lambda r: r.day))
        users.append(UserRecord(
            seqn=seqn,
            age_years=prof.age_years,
            sex=prof.sex,
            race_eth=prof.race_eth,
            education=prof.education,
            income_ratio=prof.income_ratio,
            bmi=prof.bmi,
            flag_diabetes=prof.flag_diabetes,
            flag_cvd=prof.flag_cvd,
            exclusions=prof.exclusions,
            intake=mean_profile(day_profiles),
            days=day_profiles,
        ))
        report.linked += 1
    return users, report


# Exclusion reasons, checked in order; a user is counted once under the
# first reason that applies.
REASON_MISSING_DEMOGRAPHIC = "missing_demographic"
REASON_MISSING_ANTHROPOMETRIC = "missing_anthropometric"
REASON_MISSING_HEALTH_FLAGS = "missing_health_flags"
REASON_ZERO_ENERGY = "zero_energy"


def _exclusion_reason(user: UserRecord) -> str | None:
    if (user.age_years is None
            or user.sex not in ("male", "female")
            or user.race_eth.lower() in _UNKNOWN
            or user.education.lower() in _UNKNOWN
            or user.income_ratio is None or user.income_ratio < 0):
        return REASON_MISSING_DEMOGRAPHIC
    if user.bmi is None or not math.isfinite(user.bmi) or user.bmi <= 0:
        return REASON_MISSING_ANTHROPOMETRIC
    if user.flag_diabetes is None or user.flag_cvd is None:
        return REASON_MISSING_HEALTH_FLAGS
    if not any(d.energy_kcal > 0 for d in user.days):
        return REASON_ZERO_ENERGY
    return None


def apply_quality_filter(users: list[UserRecord]) -> tuple[list[UserRecord], FilterReport]:
    """Keep records with complete core fields, valid BMI, and a positive-energy day."""
    kept: list[UserRecord] = []
    report = FilterReport()
    for user in users:
        reason = _exclusion_reason(user)
        if reason is None:
            kept.append(user)
        else:
            report.excluded_by_reason[reason] = report.excluded_by_reason.get(reason, 0) + 1
    report.kept = len(kept)
    return kept, report


def parse_food_rows(source) -> list[FoodItem]:
    """Parse foods.csv rows; food_code must be unique."""
    stream = _open_source(source)
    try:
        reader = csv.DictReader(stream)
        _check_columns(reader.fieldnames, FOOD_COLUMNS, "foods table")
        items: list[FoodItem] = []
        seen: set[int] = set()
        for line, row in enumerate(reader, start=2):
            try:
                code = int(row["food_code"])
            except (TypeError, ValueError):
                raise ParseError(f"line {line}: column food_code: not an integer",
                                 line=line, column="food_code") from None
            if code <= 0:
                raise ParseError(f"line {line}: column food_code: must be positive",
                                 line=line, column="food_code")
            if code in seen:
                raise SchemaError(f"duplicate food_code {code} (line {line})")
            seen.add(code)
            quantities: dict[str, float] = {}
            for col in FOOD_QUANTITY_FIELDS:
                raw = (row.get(col) or "").strip()
                if col == "added_sugars_g" and raw == "" and OPTIONAL_TSP_COLUMN in row:
                    tsp = _parse_quantity((row.get(OPTIONAL_TSP_COLUMN) or "0").strip() or "0",
                                          line, OPTIONAL_TSP_COLUMN)
                    quantities[col] = tsp * GRAMS_PER_TSP_EQ
                    continue
                quantities[col] = _parse_quantity(raw, line, col)
            items.append(FoodItem(
                food_code=code,
                description=(row.get("description") or "").strip(),
                serving_desc=(row.get("serving_desc") or "").strip(),
                tags=_parse_tags(row.get("tags", "")),
                **quantities,
            ))
        return items
    finally:
        if isinstance(source, (str, Path)):
            stream.close()


def _fmt(value: float) -> str:
    return repr(float(value))


def write_persons_csv(target, users: list[UserRecord]) -> None:
    """Serialize users back to the persons.csv schema, one row per recall day."""
    own = isinstance(target, (str, Path))
    stream: TextIO = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        writer = csv.writer(stream)
        writer.writerow(PERSON_COLUMNS)
        for user in users:
            for day_idx, day in enumerate(user.days, start=1):
                row = [
                    user.seqn, day_idx,
                    "" if user.age_years is None else _fmt(user.age_years),
                    user.sex, user.race_eth, user.education,
                    "" if user.income_ratio is None else _fmt(user.income_ratio),
                    "" if user.bmi is None else _fmt(user.bmi),
                    "" if user.flag_diabetes is None else int(user.flag_diabetes),
                    "" if user.flag_cvd is None else int(user.flag_cvd),
                    ";".join(sorted(user.exclusions)),
                ] + [_fmt(getattr(day, f)) for f in INTAKE_FIELDS]
                writer.writerow(row)
    finally:
        if own:
            stream.close()


def write_foods_csv(target, items: list[FoodItem]) -> None:
    own = isinstance(target, (str, Path))
    stream: TextIO = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        writer = csv.writer(stream)
        writer.writerow(FOOD_COLUMNS)
        for item in items:
            writer.writerow(
                [item.food_code, item.description, item.serving_desc,
                 ";".join(sorted(item.tags))]
                + [_fmt(getattr(item, f)) for f in FOOD_QUANTITY_FIELDS])
    finally:
        if own:
            stream.close()


# ---------------------------------------------------------------------------
# Synthetic population / corpus generators (desk-scale stand-ins for the
# restricted survey extracts).
# ---------------------------------------------------------------------------

_EXCLUSION_TAGS = ("dairy", "meat", "gluten", "nuts")


def gen_synthetic_population(seed: int, n: int) -> list[UserRecord]:
    """Deterministic synthetic users whose baseline diet quality spans ~20-80.

    A latent quality score drives every component draw, so low-quality
    users are low across the board and the population covers the score
    range instead of clustering at the mean.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)

    q = rng.uniform(0.0, 1.0, n)                       # latent diet quality
    energy = rng.lognormal(mean=math.log(2000.0), sigma=0.23, size=n)
    energy = np.clip(energy, 600.0, 6000.0)

    def adequacy_frac() -> np.ndarray:
        return np.clip(0.2 + 0.72 * q + rng.normal(0.0, 0.28, n), 0.0, 1.5)

    def goodness() -> np.ndarray:
        return np.clip(0.12 + 0.6 * q + rng.normal(0.0, 0.2, n), 0.0, 1.0)

    per_k = energy / 1000.0
    totfruit = 0.8 * adequacy_frac() * per_k
    wholefruit = totfruit * np.clip(0.3 + 0.5 * q + rng.normal(0.0, 0.2, n), 0.0, 1.0)
    totveg = 1.1 * adequacy_frac() * per_k
    greens = totveg * np.clip(0.15 + 0.4 * q + rng.normal(0.0, 0.15, n), 0.0, 0.9)
    wholegrain = 1.5 * adequacy_frac() * per_k
    dairy = 1.3 * adequacy_frac() * per_k
    totprotein = 2.5 * adequacy_frac() * per_k
    seaplant = totprotein * np.clip(0.1 + 0.4 * q + rng.normal(0.0, 0.15, n), 0.0, 0.8)

    g_refined = goodness()
    refined = (4.3 - 2.5 * g_refined) * per_k
    g_sodium = goodness()
    sodium_mg = (2.0 - 0.9 * g_sodium) * energy        # g/1000 kcal -> mg/day
    g_sugar = goodness()
    added_sugars = (26.0 - 19.5 * g_sugar) / 100.0 * energy / 4.0
    g_sfa = goodness()
    sfa = (16.0 - 8.0 * g_sfa) / 100.0 * energy / 9.0
    ratio = 0.9 + 2.2 * goodness()
    unsat = ratio * sfa
    mufa = 0.6 * unsat
    pufa = 0.4 * unsat

    fiber = np.clip(6.0 + 22.0 * q + rng.normal(0.0, 4.0, n), 0.0, 60.0)
    protein = energy * 0.15 / 4.0 * (1.0 + rng.normal(0.0, 0.1, n))
    protein = np.clip(protein, 10.0, None)
    fat = (sfa + mufa + pufa) * 1.05
    carb = np.clip((energy - 4.0 * protein - 9.0 * fat) / 4.0, 0.0, None)
    potassium = np.clip(1500.0 + 2500.0 * q + rng.normal(0.0, 300.0, n), 200.0, None)

    age = rng.uniform(18.0, 85.0, n)
    sex_draw = rng.random(n)
    race = rng.integers(1, 6, n)
    education = rng.integers(1, 6, n)
    income = rng.uniform(0.0, 5.0, n)
    bmi = np.clip(rng.normal(28.0, 5.5, n), 16.0, 60.0)
    diabetes = rng.random(n) < 0.12
    cvd = rng.random(n) < 0.08
    excl_draw = rng.random(n)
    excl_pick = rng.integers(0, len(_EXCLUSION_TAGS), n)

    users: list[UserRecord] = []
    for i in range(n):
        intake = IntakeProfile(
            energy_kcal=round(float(energy[i]), 3),
            protein_g=round(float(protein[i]), 3),
            carb_g=round(float(carb[i]), 3),
            fat_g=round(float(fat[i]), 3),
            fiber_g=round(float(fiber[i]), 3),
            sodium_mg=round(float(sodium_mg[i]), 3),
            potassium_mg=round(float(potassium[i]), 3),
            sfa_g=round(float(sfa[i]), 3),
            mufa_g=round(float(mufa[i]), 3),
            pufa_g=round(float(pufa[i]), 3),
            added_sugars_g=round(float(added_sugars[i]), 3),
            f_totfruit_cup=round(float(totfruit[i]), 4),
            f_wholefruit_cup=round(float(min(wholefruit[i], totfruit[i])), 4),
            f_totveg_cup=round(float(totveg[i]), 4),
            f_greensbeans_cup=round(float(min(greens[i], totveg[i])), 4),
            f_wholegrain_oz=round(float(wholegrain[i]), 4),
            f_dairy_cup=round(float(dairy[i]), 4),
            f_totprotein_oz=round(float(totprotein[i]), 4),
            f_seaplant_oz=round(float(min(seaplant[i], totprotein[i])), 4),
            f_refinedgrain_oz=round(float(refined[i]), 4),
        )
        exclusions = frozenset()
        if excl_draw[i] < 0.12:
            exclusions = frozenset({_EXCLUSION_TAGS[int(excl_pick[i])]})
        users.append(UserRecord(
            seqn=i + 1,
            age_years=round(float(age[i]), 1),
            sex="male" if sex_draw[i] < 0.5 else "female",
            race_eth=str(int(race[i])),
            education=str(int(education[i])),
            income_ratio=round(float(income[i]), 2),
            bmi=round(float(bmi[i]), 1),
            flag_diabetes=bool(diabetes[i]),
            flag_cvd=bool(cvd[i]),
            exclusions=exclusions,
            intake=intake,
            days=(intake,),
        ))
    return users


_FOOD_CATEGORIES: tuple[dict, ...] = (
    dict(bases=("apple slices", "banana", "orange segments", "blueberries",
                "strawberries", "pear slices", "melon cubes", "grapes"),
         serving="1 cup", energy=(50, 120), tags=("fruit",),
         comp={"f_totfruit_cup": (0.5, 1.2), "f_wholefruit_cup": "f_totfruit_cup"},
         fiber=(1.0, 4.0)),
    dict(bases=("orange juice", "apple juice", "grape juice"),
         serving="1 cup", energy=(100, 170), tags=("fruit", "juice"),
         comp={"f_totfruit_cup": (0.5, 1.0)}),
    dict(bases=("carrots", "broccoli florets", "green beans", "summer squash",
                "bell peppers", "tomatoes", "zucchini", "cauliflower"),
         serving="1 cup", energy=(25, 80), tags=("vegetable",),
         comp={"f_totveg_cup": (0.5, 1.2)}, fiber=(1.0, 5.0)),
    dict(bases=("spinach", "kale", "collard greens", "romaine salad", "mustard greens"),
         serving="1 cup", energy=(10, 50), tags=("vegetable", "greens"),
         comp={"f_totveg_cup": (0.4, 1.0), "f_greensbeans_cup": "f_totveg_cup"},
         fiber=(1.0, 4.0)),
    dict(bases=("lentils", "black beans", "chickpeas", "kidney beans", "split peas"),
         serving="1/2 cup", energy=(100, 160), tags=("vegetable", "legume"),
         comp={"f_totveg_cup": (0.3, 0.6), "f_greensbeans_cup": "f_totveg_cup",
               "f_totprotein_oz": (0.8, 1.6), "f_seaplant_oz": "f_totprotein_oz"},
         fiber=(4.0, 8.0)),
    dict(bases=("oatmeal", "brown rice", "whole wheat bread", "quinoa",
                "barley pilaf", "bulgur", "whole grain cereal"),
         serving="1 serving", energy=(80, 200), tags=("grain", "gluten"),
         comp={"f_wholegrain_oz": (0.6, 1.6)}, fiber=(2.0, 5.0)),
    dict(bases=("white rice", "pasta", "white bread", "flour tortilla", "saltine crackers"),
         serving="1 serving", energy=(90, 220), tags=("grain", "gluten", "refined"),
         comp={"f_refinedgrain_oz": (0.8, 2.0)}, sodium=(50, 300)),
    dict(bases=("plain yogurt", "low-fat milk", "cheddar cheese", "kefir", "cottage cheese"),
         serving="1 cup", energy=(80, 180), tags=("dairy",),
         comp={"f_dairy_cup": (0.5, 1.2)}, sodium=(40, 250), sfa=(0.5, 3.0)),
    dict(bases=("grilled chicken breast", "turkey slices", "lean beef strips",
                "pork loin", "scrambled eggs"),
         serving="3 oz", energy=(120, 250), tags=("protein", "meat"),
         comp={"f_totprotein_oz": (1.5, 3.0)}, sodium=(50, 300), sfa=(0.5, 3.0)),
    dict(bases=("baked salmon", "tuna", "grilled shrimp", "sardines"),
         serving="3 oz", energy=(100, 220), tags=("protein", "seafood"),
         comp={"f_totprotein_oz": (1.5, 3.0), "f_seaplant_oz": "f_totprotein_oz"},
         sodium=(50, 300)),
    dict(bases=("tofu cubes", "tempeh", "edamame"),
         serving="1/2 cup", energy=(90, 180), tags=("protein", "soy"),
         comp={"f_totprotein_oz": (1.0, 2.2), "f_seaplant_oz": "f_totprotein_oz"},
         fiber=(1.0, 4.0)),
    dict(bases=("almonds", "walnuts", "peanut butter", "sunflower seeds", "pistachios"),
         serving="1 oz", energy=(150, 220), tags=("protein", "nuts"),
         comp={"f_totprotein_oz": (0.6, 1.4), "f_seaplant_oz": "f_totprotein_oz"},
         mufa=(4.0, 9.0), pufa=(2.0, 6.0), fiber=(1.0, 3.0)),
    dict(bases=("canned soup", "salted pretzels", "deli ham sandwich", "instant noodles"),
         serving="1 serving", energy=(150, 350), tags=("processed",),
         comp={"f_refinedgrain_oz": (0.5, 1.5)}, sodium=(550, 1200), sfa=(1.0, 4.0)),
    dict(bases=("granola bar, sweetened", "frosted cereal", "chocolate chip cookies",
                "sweetened soda"),
         serving="1 serving", energy=(120, 300), tags=("processed", "sweet"),
         comp={"f_refinedgrain_oz": (0.2, 1.0)}, sugars=(12, 30), sfa=(1.0, 5.0)),
)

_PREP_WORDS = ("", "fresh", "frozen", "homestyle", "classic", "hearty", "seasoned")


def gen_synthetic_foods(seed: int, n: int) -> list[FoodItem]:
    """Deterministic food corpus cycling over the pattern-component categories."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    items: list[FoodItem] = []
    for i in range(n):
        cat = _FOOD_CATEGORIES[i % len(_FOOD_CATEGORIES)]
        base = cat["bases"][(i // len(_FOOD_CATEGORIES)) % len(cat["bases"])]
        prep = _PREP_WORDS[(i // (len(_FOOD_CATEGORIES) * len(cat["bases"]))) % len(_PREP_WORDS)]
        description = f"{prep} {base}".strip()

        q: dict[str, float] = {f: 0.0 for f in FOOD_QUANTITY_FIELDS}
        lo, hi = cat["energy"]
        q["energy_kcal"] = round(float(rng.uniform(lo, hi)), 1)
        for fld, rule in cat["comp"].items():
            if isinstance(rule, str):
                q[fld] = q[rule]
            else:
                q[fld] = round(float(rng.uniform(*rule)), 3)
        for key, fld in (("sodium", "sodium_mg"), ("sugars", "added_sugars_g"),
                         ("sfa", "sfa_g"), ("mufa", "mufa_g"), ("pufa", "pufa_g"),
                         ("fiber", "fiber_g")):
            if key in cat:
                q[fld] = round(float(rng.uniform(*cat[key])), 2)

        tags = set(cat["tags"])
        if q["sodium_mg"] > 500:
            tags.add("high_sodium")
        if q["added_sugars_g"] > 10:
            tags.add("sugary")
        items.append(FoodItem(
            food_code=10001 + i,
            description=description,
            serving_desc=cat["serving"],
            tags=frozenset(tags),
            **q,
        ))
    return items


