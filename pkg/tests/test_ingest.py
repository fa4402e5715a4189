import io

import numpy as np
import pytest

from heirec.errors import ParseError, SchemaError
from heirec.hei import score_user
from heirec.ingest import (
    FOOD_COLUMNS,
    PERSON_COLUMNS,
    apply_quality_filter,
    gen_synthetic_foods,
    gen_synthetic_population,
    link_and_average,
    mean_profile,
    parse_food_rows,
    parse_person_rows,
    parse_profile_rows,
    read_persons_csv,
    write_foods_csv,
    write_persons_csv,
)

from conftest import make_user


def person_row(seqn=101, day=1, **overrides) -> str:
    values = {c: "0" for c in PERSON_COLUMNS}
    values.update({
        "seqn": str(seqn), "day": str(day), "age_years": "40", "sex": "female",
        "race_eth": "2", "education": "3", "income_ratio": "1.5", "bmi": "27.5",
        "flag_diabetes": "0", "flag_cvd": "0", "exclusions": "",
        "energy_kcal": "2000",
    })
    values.update({k: str(v) for k, v in overrides.items()})
    return ",".join(values[c] for c in PERSON_COLUMNS)


def persons_csv(*rows: str) -> io.StringIO:
    return io.StringIO(",".join(PERSON_COLUMNS) + "\n" + "\n".join(rows) + "\n")


class TestParsePersons:
    def test_single_valid_row_round_trips(self):
        records = parse_person_rows(persons_csv(person_row()))
        assert len(records) == 1
        rec = records[0]
        assert rec.seqn == 101 and rec.day == 1
        assert rec.intake.energy_kcal == 2000.0
        assert all(getattr(rec.intake, f) == 0.0
                   for f in rec.intake.as_dict() if f != "energy_kcal")

    def test_negative_quantity_names_line_and_column(self):
        with pytest.raises(ParseError) as err:
            parse_person_rows(persons_csv(person_row(energy_kcal="-5")))
        assert err.value.line == 2
        assert err.value.column == "energy_kcal"

    def test_six_rows_three_seqns(self):
        rows = [person_row(seqn=s, day=d) for s in (1, 2, 3) for d in (1, 2)]
        records = parse_person_rows(persons_csv(*rows))
        assert len(records) == 6
        assert len({r.seqn for r in records}) == 3

    def test_missing_column_is_schema_error(self):
        header = ",".join(c for c in PERSON_COLUMNS if c != "bmi")
        with pytest.raises(SchemaError, match="bmi"):
            parse_person_rows(io.StringIO(header + "\n"))

    def test_extra_columns_preserved(self):
        header = ",".join(PERSON_COLUMNS) + ",note"
        body = person_row() + ",hello"
        records = parse_person_rows(io.StringIO(header + "\n" + body + "\n"))
        assert records[0].extras == {"note": "hello"}

    def test_row_order_preserved(self):
        rows = [person_row(seqn=s) for s in (5, 3, 9)]
        records = parse_person_rows(persons_csv(*rows))
        assert [r.seqn for r in records] == [5, 3, 9]

    def test_bad_day_rejected(self):
        with pytest.raises(ParseError):
            parse_person_rows(persons_csv(person_row(day=3)))

    def test_hierarchy_violation_rejected(self):
        row = person_row(f_totfruit_cup="0.5", f_wholefruit_cup="1.0")
        with pytest.raises(ParseError, match="f_wholefruit_cup"):
            parse_person_rows(persons_csv(row))

    def test_tsp_column_converts_when_grams_empty(self):
        header = ",".join(PERSON_COLUMNS) + ",added_sugars_tsp"
        row = person_row(added_sugars_g="") + ",2"
        records = parse_person_rows(io.StringIO(header + "\n" + row + "\n"))
        assert records[0].intake.added_sugars_g == pytest.approx(8.4)

    def test_grams_win_over_tsp_when_present(self):
        header = ",".join(PERSON_COLUMNS) + ",added_sugars_tsp"
        row = person_row(added_sugars_g="12") + ",2"
        records = parse_person_rows(io.StringIO(header + "\n" + row + "\n"))
        assert records[0].intake.added_sugars_g == 12.0


class TestLinkAndAverage:
    def test_two_day_mean(self):
        rows = [person_row(seqn=7, day=1, energy_kcal=1800),
                person_row(seqn=7, day=2, energy_kcal=2200)]
        days, profiles = read_persons_csv(persons_csv(*rows))
        users, report = link_and_average(days, profiles)
        assert len(users) == 1
        assert users[0].intake.energy_kcal == pytest.approx(2000.0)
        assert len(users[0].days) == 2
        assert report.dropped_missing_profile == 0

    def test_single_day_identity(self):
        days, profiles = read_persons_csv(persons_csv(person_row(seqn=9)))
        users, _ = link_and_average(days, profiles)
        assert users[0].intake == days[0].intake

    def test_missing_profile_dropped_and_counted(self):
        rows = [person_row(seqn=s, day=d) for s in (1, 2, 3) for d in (1, 2)]
        days = parse_person_rows(persons_csv(*rows))
        profiles = [p for p in parse_profile_rows(persons_csv(*rows)) if p.seqn != 2]
        users, report = link_and_average(days, profiles)
        assert len(users) == 2
        assert {u.seqn for u in users} == {1, 3}
        assert report.dropped_missing_profile == 1

    def test_averaging_single_day_idempotent(self):
        days, profiles = read_persons_csv(persons_csv(person_row()))
        users, _ = link_and_average(days, profiles)
        assert mean_profile([users[0].intake]) == users[0].intake


class TestQualityFilter:
    def test_missing_bmi_excluded(self):
        user = make_user(bmi=None)
        kept, report = apply_quality_filter([user])
        assert kept == []
        assert report.excluded_by_reason == {"missing_anthropometric": 1}

    def test_complete_user_kept(self):
        kept, report = apply_quality_filter([make_user()])
        assert len(kept) == 1
        assert report.excluded == 0

    def test_mixed_reasons_sum(self):
        users = [make_user(seqn=i) for i in range(1, 8)]
        users.append(make_user(seqn=8, sex="unknown"))
        users.append(make_user(seqn=9, bmi=None))
        users.append(make_user(seqn=10, flag_cvd=None))
        kept, report = apply_quality_filter(users)
        assert len(kept) == 7
        assert report.excluded == 3
        assert set(report.excluded_by_reason) == {
            "missing_demographic", "missing_anthropometric", "missing_health_flags"}

    def test_zero_energy_excluded(self):
        from heirec.ingest import IntakeProfile
        zero = IntakeProfile(energy_kcal=0)
        user = make_user(intake=zero, days=(zero,))
        kept, report = apply_quality_filter([user])
        assert kept == []
        assert report.excluded_by_reason == {"zero_energy": 1}

    def test_partition_soundness(self):
        users = [make_user(seqn=i) for i in range(1, 6)]
        users += [make_user(seqn=6, age_years=None), make_user(seqn=7, bmi=-1.0)]
        kept, report = apply_quality_filter(users)
        assert len(kept) + report.excluded == len(users)
        assert report.kept == len(kept)


class TestParseFoods:
    def food_row(self, code=50000, desc="oatmeal, cooked", **overrides):
        values = {c: "0" for c in FOOD_COLUMNS}
        values.update({"food_code": str(code), "description": desc,
                       "serving_desc": "1 cup", "tags": "grain",
                       "energy_kcal": "150", "f_wholegrain_oz": "1.0"})
        values.update({k: str(v) for k, v in overrides.items()})
        return ",".join(f'"{values[c]}"' if "," in values[c] else values[c]
                        for c in FOOD_COLUMNS)

    def foods_csv(self, *rows):
        return io.StringIO(",".join(FOOD_COLUMNS) + "\n" + "\n".join(rows) + "\n")

    def test_round_trip_row(self):
        items = parse_food_rows(self.foods_csv(self.food_row()))
        assert len(items) == 1
        item = items[0]
        assert item.food_code == 50000
        assert item.description == "oatmeal, cooked"
        assert item.f_wholegrain_oz == 1.0
        assert item.energy_kcal == 150.0
        assert item.tags == frozenset({"grain"})

    def test_duplicate_code_names_the_code(self):
        with pytest.raises(SchemaError, match="50000"):
            parse_food_rows(self.foods_csv(self.food_row(), self.food_row()))

    def test_negative_quantity_rejected(self):
        with pytest.raises(ParseError):
            parse_food_rows(self.foods_csv(self.food_row(sodium_mg="-1")))

    def test_generated_corpus_distinct_codes(self):
        foods = gen_synthetic_foods(3, 200)
        assert len(foods) == 200
        assert len({f.food_code for f in foods}) == 200

    def test_generated_corpus_survives_csv_round_trip(self, tmp_path):
        foods = gen_synthetic_foods(3, 50)
        path = tmp_path / "foods.csv"
        write_foods_csv(path, foods)
        parsed = parse_food_rows(str(path))
        assert parsed == foods


class TestSyntheticPopulation:
    def test_determinism_byte_identical(self):
        a, b = io.StringIO(), io.StringIO()
        write_persons_csv(a, gen_synthetic_population(42, 100))
        write_persons_csv(b, gen_synthetic_population(42, 100))
        assert a.getvalue() == b.getvalue()

    def test_different_seed_differs(self):
        a = gen_synthetic_population(42, 100)
        b = gen_synthetic_population(43, 100)
        assert a != b

    def test_zero_users_rejected(self):
        with pytest.raises(ValueError):
            gen_synthetic_population(42, 0)

    def test_seed42_population_spans_score_range(self):
        users = gen_synthetic_population(42, 2416)
        totals = np.array([score_user(u).total for u in users])
        assert totals.min() < 35.0
        assert totals.max() > 65.0

    def test_population_passes_quality_filter(self):
        users = gen_synthetic_population(1, 200)
        kept, report = apply_quality_filter(users)
        assert len(kept) == 200
        assert report.excluded == 0

    def test_serialize_parse_round_trip_exact(self, tmp_path):
        users = gen_synthetic_population(11, 40)
        path = tmp_path / "persons.csv"
        write_persons_csv(path, users)
        days, profiles = read_persons_csv(str(path))
        rebuilt, report = link_and_average(days, profiles)
        assert report.dropped_missing_profile == 0
        assert len(rebuilt) == 40
        for orig, back in zip(sorted(users, key=lambda u: u.seqn), rebuilt):
            assert back.intake == orig.intake
            assert back.exclusions == orig.exclusions
            assert back.flag_diabetes == orig.flag_diabetes
            assert back.bmi == orig.bmi
