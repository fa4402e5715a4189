import numpy as np
import pytest

from heirec.config import PipelineConfig
from heirec.corpus import build_index
from heirec.ingest import (
    INTAKE_FIELDS,
    IntakeProfile,
    UserRecord,
    gen_synthetic_foods,
    gen_synthetic_population,
)

FIXTURE_FOOD_SEED = 7
FIXTURE_FOOD_COUNT = 200


@pytest.fixture(scope="session")
def fixture_foods():
    return gen_synthetic_foods(FIXTURE_FOOD_SEED, FIXTURE_FOOD_COUNT)


@pytest.fixture(scope="session")
def fixture_index(fixture_foods):
    return build_index(fixture_foods)


@pytest.fixture(scope="session")
def population_small():
    return gen_synthetic_population(42, 60)


@pytest.fixture()
def cfg():
    return PipelineConfig()


def make_random_profile(rng: np.random.Generator) -> IntakeProfile:
    """Hierarchy-consistent random profile with positive energy."""
    energy = float(rng.uniform(800, 3500))
    per_k = energy / 1000.0
    totfruit = float(rng.uniform(0, 1.5)) * per_k
    totveg = float(rng.uniform(0, 2.0)) * per_k
    totprotein = float(rng.uniform(0, 4.0)) * per_k
    sfa = float(rng.uniform(0, 30))
    return IntakeProfile(
        energy_kcal=energy,
        protein_g=float(rng.uniform(20, 150)),
        carb_g=float(rng.uniform(50, 400)),
        fat_g=float(rng.uniform(20, 150)),
        fiber_g=float(rng.uniform(0, 50)),
        sodium_mg=float(rng.uniform(0, 6000)),
        potassium_mg=float(rng.uniform(500, 5000)),
        sfa_g=sfa,
        mufa_g=float(rng.uniform(0, 40)),
        pufa_g=float(rng.uniform(0, 30)),
        added_sugars_g=float(rng.uniform(0, 120)),
        f_totfruit_cup=totfruit,
        f_wholefruit_cup=totfruit * float(rng.uniform(0, 1)),
        f_totveg_cup=totveg,
        f_greensbeans_cup=totveg * float(rng.uniform(0, 1)),
        f_wholegrain_oz=float(rng.uniform(0, 4.0)) * per_k,
        f_dairy_cup=float(rng.uniform(0, 2.5)) * per_k,
        f_totprotein_oz=totprotein,
        f_seaplant_oz=totprotein * float(rng.uniform(0, 1)),
        f_refinedgrain_oz=float(rng.uniform(0, 6.0)) * per_k,
    )


def make_user(seqn: int = 1, intake: IntakeProfile | None = None,
              **overrides) -> UserRecord:
    intake = intake or IntakeProfile(energy_kcal=2000)
    fields = dict(
        seqn=seqn, age_years=40.0, sex="female", race_eth="2", education="4",
        income_ratio=2.5, bmi=26.0, flag_diabetes=False, flag_cvd=False,
        exclusions=frozenset(), intake=intake, days=(intake,),
    )
    fields.update(overrides)
    return UserRecord(**fields)


def profile_fields() -> tuple[str, ...]:
    return INTAKE_FIELDS
