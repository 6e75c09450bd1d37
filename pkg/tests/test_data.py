import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import MANUFACTURING, write_json
from spiderlink.data import (
    check_split_disjoint,
    corpus_stats,
    dump_schemas,
    load_examples,
    load_schemas,
)
from spiderlink.errors import DataFormatError, ValidationError


def test_load_schemas_counts(schemas, manufacturing):
    assert [s.db_id for s in schemas] == ["manufacturing", "student_pets", "world"]
    assert len(manufacturing.tables) == 2
    assert len(manufacturing.columns) == 8  # "*" plus 7 real columns


def test_schema_structure(manufacturing):
    assert manufacturing.columns[0].table_index == -1
    assert manufacturing.tables[0].column_indices == (1, 2, 3, 4)
    assert manufacturing.tables[1].column_indices == (5, 6, 7)
    assert manufacturing.foreign_keys == ((4, 5),)
    assert manufacturing.column_label(4) == "products.Manufacturer"
    assert manufacturing.column_label(0) == "*"


def test_load_schemas_two_tables_five_columns(tmp_path):
    # hand-built: 5 real columns plus the all-columns entry -> 6 entries
    record = {
        "db_id": "tiny",
        "table_names": ["orders", "items"],
        "table_names_original": ["orders", "items"],
        "column_names": [[-1, "*"], [0, "id"], [0, "date"], [1, "id"], [1, "label"], [1, "cost"]],
        "column_names_original": [[-1, "*"], [0, "id"], [0, "date"], [1, "id"], [1, "label"], [1, "cost"]],
        "column_types": ["text", "number", "time", "number", "text", "number"],
        "primary_keys": [1, 3],
        "foreign_keys": [],
    }
    (schema,) = load_schemas(write_json(tmp_path / "tables.json", [record]))
    assert len(schema.tables) == 2
    assert len(schema.columns) == 6


def test_load_schemas_empty_file(tmp_path):
    path = write_json(tmp_path / "tables.json", [])
    assert load_schemas(path) == []


def test_load_schemas_duplicate_db_id(tmp_path):
    path = write_json(tmp_path / "tables.json", [MANUFACTURING, MANUFACTURING])
    with pytest.raises(ValidationError, match="duplicate db_id"):
        load_schemas(path)


def test_load_schemas_malformed_record_named(tmp_path):
    bad = dict(MANUFACTURING)
    del bad["column_types"]
    path = write_json(tmp_path / "tables.json", [bad])
    with pytest.raises(DataFormatError, match=r"schema\[0\].*column_types"):
        load_schemas(path)


def test_load_schemas_rejects_bad_foreign_key(tmp_path):
    bad = dict(MANUFACTURING)
    bad["foreign_keys"] = [[0, 5]]  # the all-columns entry can never be a key
    path = write_json(tmp_path / "tables.json", [bad])
    with pytest.raises(ValidationError, match="foreign key"):
        load_schemas(path)


def test_load_schemas_rejects_empty_table(tmp_path):
    bad = dict(MANUFACTURING)
    bad["table_names"] = MANUFACTURING["table_names"] + ["ghost"]
    bad["table_names_original"] = MANUFACTURING["table_names_original"] + ["ghost"]
    path = write_json(tmp_path / "tables.json", [bad])
    with pytest.raises(ValidationError, match="no columns"):
        load_schemas(path)


def test_load_schemas_not_json(tmp_path):
    path = tmp_path / "tables.json"
    path.write_text("not json", encoding="utf-8")
    with pytest.raises(DataFormatError, match="not valid JSON"):
        load_schemas(path)


def test_schema_round_trip(tmp_path, schemas):
    out = tmp_path / "roundtrip.json"
    dump_schemas(schemas, out)
    assert load_schemas(out) == schemas


def test_load_examples(fixture_dir, schemas, examples):
    assert len(examples) == 10
    assert examples[0].db_id == "manufacturing"
    assert examples[0].question_tokens[-1] == "."
    assert load_examples(fixture_dir / "empty.json", schemas) == []


def test_load_examples_prefers_file_tokens(tmp_path, schemas):
    path = write_json(
        tmp_path / "ex.json",
        [
            {
                "db_id": "world",
                "question": "How many countries?",
                "question_toks": ["HOW", "many", "countries", "?"],
                "query": "SELECT count(*) FROM countries",
            }
        ],
    )
    (example,) = load_examples(path, schemas)
    assert example.question_tokens == ("HOW", "many", "countries", "?")


def test_load_examples_unknown_db(tmp_path, schemas):
    path = write_json(
        tmp_path / "ex.json",
        [{"db_id": "nope", "question": "q?", "query": "SELECT 1"}],
    )
    with pytest.raises(ValidationError, match=r"example\[0\].*'nope'"):
        load_examples(path, schemas)


def test_corpus_stats_fixture_corpus(examples, schemas):
    stats = corpus_stats(examples, schemas)
    assert stats.n_questions == 10
    assert stats.n_distinct_sql == 9  # two spellings of the same query
    assert stats.n_databases == 1
    assert stats.avg_tables_per_db == 2.0


def test_corpus_stats_single_example(examples, schemas):
    stats = corpus_stats(examples[:1], schemas)
    assert stats.n_questions == 1
    assert stats.n_distinct_sql == 1
    assert stats.n_databases == 1
    assert stats.avg_tables_per_db == 2.0


def test_corpus_stats_averages_over_referenced_dbs(fixture_dir, schemas):
    train = load_examples(fixture_dir / "train.json", schemas)
    stats = corpus_stats(train, schemas)
    assert stats.n_databases == 2
    assert stats.avg_tables_per_db == pytest.approx((2 + 3) / 2)


def test_corpus_stats_empty_rejected(schemas):
    with pytest.raises(ValueError):
        corpus_stats([], schemas)


def test_split_disjoint(fixture_dir, schemas):
    train = load_examples(fixture_dir / "train.json", schemas)
    test = load_examples(fixture_dir / "test.json", schemas)
    report = check_split_disjoint(train, test)
    assert report.disjoint and report.overlap == frozenset()

    same = check_split_disjoint(train, train)
    assert not same.disjoint
    assert same.overlap == {"manufacturing", "student_pets"}


def test_split_disjoint_symmetric(fixture_dir, schemas, examples):
    train = load_examples(fixture_dir / "train.json", schemas)
    assert check_split_disjoint(train, examples) == check_split_disjoint(examples, train)


@given(mask=st.sets(st.integers(min_value=0, max_value=9)))
def test_partition_property(examples, schemas, mask):
    left = [e for i, e in enumerate(examples) if i in mask]
    right = [e for i, e in enumerate(examples) if i not in mask]
    whole = corpus_stats(examples, schemas)
    n_left = corpus_stats(left, schemas).n_questions if left else 0
    n_right = corpus_stats(right, schemas).n_questions if right else 0
    assert n_left + n_right == whole.n_questions
    d_left = corpus_stats(left, schemas).n_distinct_sql if left else 0
    d_right = corpus_stats(right, schemas).n_distinct_sql if right else 0
    assert whole.n_distinct_sql <= d_left + d_right


def test_examples_file_is_utf8_json(fixture_dir):
    raw = json.loads((fixture_dir / "examples.json").read_text(encoding="utf-8"))
    assert {"db_id", "question", "query"} <= set(raw[0])
