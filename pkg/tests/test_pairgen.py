import json
import random
from collections import Counter

import pytest

from rotreward.executor import execute, results_equal
from rotreward.pairgen import (
    InsufficientSeeds,
    Seed,
    StrategyNotApplicable,
    StrategySpec,
    augment,
    build_dataset,
    diversify_seeds,
    ingest,
    schema_split,
    write_pairs,
)
from rotreward.sqlfront import parse


def test_ingest_valid_file(tmp_path):
    path = tmp_path / "pairs.jsonl"
    lines = [
        {"id": "a", "schema_id": "s", "reference_sql": "SELECT 1", "candidate_sql": "SELECT 2", "label": 0},
        {"id": "b", "schema_id": "s", "reference_sql": "SELECT 1", "candidate_sql": "SELECT 1", "label": 1},
        {"id": "c", "schema_id": "s", "reference_sql": "SELECT 3", "candidate_sql": "SELECT 4", "label": 0},
    ]
    path.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    result = ingest(path)
    assert len(result.pairs) == 3 and result.rejected == []


def test_ingest_rejects_bad_label_and_unparseable(tmp_path):
    path = tmp_path / "pairs.jsonl"
    lines = [
        {"id": "a", "schema_id": "s", "reference_sql": "SELECT 1", "candidate_sql": "SELECT 1", "label": 2},
        {"id": "b", "schema_id": "s", "reference_sql": "SELEC 1", "candidate_sql": "SELECT 1", "label": 1},
        {"id": "c", "schema_id": "s", "reference_sql": "SELECT 1", "candidate_sql": "SELECT 1", "label": 1},
    ]
    path.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    result = ingest(path)
    assert len(result.pairs) == 1
    assert len(result.rejected) == 2
    assert result.rejected[0][0] == 1 and "label" in result.rejected[0][1]


def test_ingest_duplicate_ids_error(tmp_path):
    path = tmp_path / "pairs.jsonl"
    line = {"id": "a", "schema_id": "s", "reference_sql": "SELECT 1", "candidate_sql": "SELECT 1", "label": 1}
    path.write_text(json.dumps(line) + "\n" + json.dumps(line) + "\n")
    with pytest.raises(ValueError, match="duplicate"):
        ingest(path)


def test_ingest_malformed_line_error(tmp_path):
    path = tmp_path / "pairs.jsonl"
    path.write_text('{"id": "a"}\nnot json\n')
    with pytest.raises(ValueError, match="malformed"):
        ingest(path)


def test_augment_in_clause_replacement_table6(catalogs, databases):
    seed = "SELECT Name FROM (SELECT Name, Age FROM technician) AS t WHERE Age IN (36, 37)"
    pair = augment(
        seed,
        catalogs["workshop"],
        StrategySpec("in-clause-replacement"),
        random.Random(0),
        db=databases["workshop"],
        schema_id="workshop",
    )
    assert pair.label == 1
    assert "age = 36 OR age = 37" in pair.candidate_sql
    a = execute(pair.reference_sql, databases["workshop"])
    b = execute(pair.candidate_sql, databases["workshop"])
    assert results_equal(a, b)


def test_augment_column_perturbation(catalogs, databases):
    pair = augment(
        "SELECT actid FROM activity",
        catalogs["activity"],
        StrategySpec("column-name-perturbation"),
        random.Random(1),
        db=databases["activity"],
        schema_id="activity",
    )
    assert pair.label == 0
    parse(pair.candidate_sql)  # parse totality
    # the perturbed name collides with no real column
    mutated = pair.candidate_sql.split()[1]
    for table in catalogs["activity"].tables.values():
        assert mutated not in table.column_names()


def test_augment_comparison_swap(catalogs, databases):
    pair = augment(
        "SELECT name FROM technician WHERE age > 34",
        catalogs["workshop"],
        StrategySpec("comparison-operator-swap"),
        random.Random(3),
        db=databases["workshop"],
        schema_id="workshop",
    )
    assert pair.label == 0
    a = execute(pair.reference_sql, databases["workshop"])
    b = execute(pair.candidate_sql, databases["workshop"])
    assert not results_equal(a, b)


def test_augment_and_or_swap_verified(catalogs, databases):
    pair = augment(
        "SELECT name FROM products WHERE price >= 60 AND price <= 120",
        catalogs["shop"],
        StrategySpec("and-or-swap"),
        random.Random(0),
        db=databases["shop"],
        schema_id="shop",
    )
    assert pair.label == 0 and (" OR " in pair.candidate_sql)


def test_augment_column_name_replacement_same_table_same_type(catalogs, databases):
    pair = augment(
        "SELECT candidate_id FROM candidate ORDER BY candidate_id DESC LIMIT 3",
        catalogs["election"],
        StrategySpec("column-name-replacement"),
        random.Random(5),
        db=databases["election"],
        schema_id="election",
    )
    assert pair.label == 0
    assert "candidate_id" not in pair.candidate_sql


def test_augment_column_removal(catalogs, databases):
    pair = augment(
        "SELECT circuitid, location FROM circuits",
        catalogs["racing"],
        StrategySpec("column-removal"),
        random.Random(0),
        db=databases["racing"],
        schema_id="racing",
    )
    assert pair.label == 0
    assert pair.candidate_sql.count(",") < pair.reference_sql.count(",")


def test_augment_not_applicable(catalogs, databases):
    with pytest.raises(StrategyNotApplicable):
        augment(
            "SELECT name FROM technician",
            catalogs["workshop"],
            StrategySpec("in-clause-replacement"),
            random.Random(0),
            db=databases["workshop"],
        )


def test_strategy_spec_validation():
    with pytest.raises(ValueError):
        StrategySpec("made-up-strategy")


def test_build_dataset_deterministic_and_balanced(corpus, catalogs, databases):
    seeds = diversify_seeds(corpus[:80], factor=12, rng_seed=2, databases=databases, catalogs=catalogs)
    first = build_dataset(seeds, catalogs, n=120, rng_seed=5, databases=databases)
    second = build_dataset(seeds, catalogs, n=120, rng_seed=5, databases=databases)
    assert first == second
    labels = Counter(p.label for p in first)
    assert abs(labels[0] - labels[1]) <= 120 * 0.05 + 7  # mix quotas, within rounding
    for pair in first:
        parse(pair.candidate_sql)


def test_build_dataset_label_soundness(corpus, catalogs, databases):
    seeds = diversify_seeds(corpus[:60], factor=8, rng_seed=0, databases=databases, catalogs=catalogs)
    pairs = build_dataset(seeds, catalogs, n=80, rng_seed=1, databases=databases)
    for pair in pairs:
        db = databases[pair.schema_id]
        reference = execute(pair.reference_sql, db)
        try:
            candidate = execute(pair.candidate_sql, db)
            equal = results_equal(candidate, reference)
        except Exception:
            equal = False
        assert equal == (pair.label == 1), pair


def test_build_dataset_single_pair(corpus, catalogs, databases):
    seeds = [s for s in corpus if "IN (" in s.sql][:3]
    pairs = build_dataset(
        seeds, catalogs, mix={"in-clause-replacement": 1.0}, n=1, rng_seed=0, databases=databases
    )
    assert len(pairs) == 1 and pairs[0].label == 1


def test_build_dataset_insufficient_seeds(catalogs, databases):
    seeds = [Seed("workshop", "SELECT name FROM technician")]  # no IN list anywhere
    with pytest.raises(InsufficientSeeds):
        build_dataset(
            seeds,
            catalogs,
            mix={"in-clause-replacement": 1.0},
            n=5,
            rng_seed=0,
            databases=databases,
            max_attempts_per_pair=50,
        )


def test_schema_split_no_leakage(corpus, catalogs, databases):
    seeds = diversify_seeds(corpus[:60], factor=6, rng_seed=0, databases=databases, catalogs=catalogs)
    pairs = build_dataset(seeds, catalogs, n=60, rng_seed=2, databases=databases)
    train, heldout = schema_split(pairs, 0.3, rng_seed=4)
    assert len(train) + len(heldout) == len(pairs)
    assert heldout
    assert not ({p.schema_id for p in train} & {p.schema_id for p in heldout})


def test_write_pairs_round_trip(tmp_path, corpus, catalogs, databases):
    seeds = [s for s in corpus if "IN (" in s.sql][:5]
    pairs = build_dataset(
        seeds, catalogs, mix={"in-clause-replacement": 1.0}, n=3, rng_seed=0, databases=databases
    )
    out = tmp_path / "out.jsonl"
    write_pairs(pairs, out)
    back = ingest(out)
    assert [p.reference_sql for p in back.pairs] == [p.reference_sql for p in pairs]


def test_hard_pairs_file_is_sound(hard_pairs_path, catalogs, databases):
    result = ingest(hard_pairs_path)
    assert result.rejected == []
    assert len(result.pairs) >= 300
    sample = result.pairs[:: max(1, len(result.pairs) // 120)]
    for pair in sample:
        db = databases[pair.schema_id]
        reference = execute(pair.reference_sql, db)
        try:
            candidate = execute(pair.candidate_sql, db)
            equal = results_equal(candidate, reference)
        except Exception:
            equal = False
        assert equal == (pair.label == 1), pair
