import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

from spiderlink.data import Column, Example, Schema, Table, load_examples, load_schemas
from spiderlink.embed import FileVectorStore

MANUFACTURING = {
    "db_id": "manufacturing",
    "table_names": ["products", "manufacturers"],
    "table_names_original": ["products", "manufacturers"],
    "column_names": [
        [-1, "*"],
        [0, "code"],
        [0, "name"],
        [0, "price"],
        [0, "manufacturer"],
        [1, "code"],
        [1, "name"],
        [1, "headquarter"],
    ],
    "column_names_original": [
        [-1, "*"],
        [0, "Code"],
        [0, "Name"],
        [0, "Price"],
        [0, "Manufacturer"],
        [1, "Code"],
        [1, "Name"],
        [1, "Headquarter"],
    ],
    "column_types": ["text", "number", "text", "number", "number", "number", "text", "text"],
    "primary_keys": [1, 5],
    "foreign_keys": [[4, 5]],
}

STUDENT_PETS = {
    "db_id": "student_pets",
    "table_names": ["students", "has pet", "pets"],
    "table_names_original": ["Students", "Has_Pet", "Pets"],
    "column_names": [
        [-1, "*"],
        [0, "student id"],
        [0, "last name"],
        [0, "first name"],
        [0, "age"],
        [0, "major"],
        [1, "student id"],
        [1, "pet id"],
        [2, "pet id"],
        [2, "pet type"],
        [2, "pet age"],
        [2, "weight"],
    ],
    "column_names_original": [
        [-1, "*"],
        [0, "StuID"],
        [0, "LName"],
        [0, "Fname"],
        [0, "Age"],
        [0, "Major"],
        [1, "StuID"],
        [1, "PetID"],
        [2, "PetID"],
        [2, "PetType"],
        [2, "pet_age"],
        [2, "weight"],
    ],
    "column_types": [
        "text",
        "number",
        "text",
        "text",
        "number",
        "number",
        "number",
        "number",
        "number",
        "text",
        "number",
        "number",
    ],
    "primary_keys": [1, 8],
    "foreign_keys": [[6, 1], [7, 8]],
}

WORLD = {
    "db_id": "world",
    "table_names": ["countries"],
    "table_names_original": ["countries"],
    "column_names": [[-1, "*"], [0, "name"], [0, "population"], [0, "continent"]],
    "column_names_original": [[-1, "*"], [0, "Name"], [0, "Population"], [0, "Continent"]],
    "column_types": ["text", "text", "number", "text"],
    "primary_keys": [1],
    "foreign_keys": [],
}

# 10 examples over one database; queries 2 and 3 normalize to the same SQL,
# so the corpus has 9 distinct queries.
EVAL_EXAMPLES = [
    ("احسب عدد المنتجات.", "SELECT count(*) FROM products"),
    ("Show the names of all products.", "SELECT name FROM products"),
    ("List product names.", "select  Name  from  PRODUCTS"),
    (
        "كم من المنتجات لكل شركة صناعية؟",
        "SELECT count(*) , T2.name FROM products AS T1 JOIN manufacturers AS T2 ON T1.Manufacturer = T2.code GROUP BY T2.name",
    ),
    ("Which products cost more than 100?", "SELECT name FROM products WHERE price > 100"),
    ("Sort product names by price.", "SELECT name FROM products ORDER BY price DESC"),
    ("What is the cheapest product?", "SELECT name FROM products ORDER BY price ASC LIMIT 1"),
    ("What is the average price?", "SELECT avg(price) FROM products"),
    ("Which manufacturers are in Tokyo?", "SELECT name FROM manufacturers WHERE headquarter = 'Tokyo'"),
    (
        "Manufacturers with more than two products?",
        "SELECT T2.name , count(*) FROM products AS T1 JOIN manufacturers AS T2 ON T1.Manufacturer = T2.code GROUP BY T2.name HAVING count(*) > 2",
    ),
]


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("corpus")
    write_json(root / "tables.json", [MANUFACTURING, STUDENT_PETS, WORLD])
    write_json(
        root / "examples.json",
        [{"db_id": "manufacturing", "question": q, "query": sql} for q, sql in EVAL_EXAMPLES],
    )
    write_json(
        root / "train.json",
        [{"db_id": "manufacturing", "question": q, "query": sql} for q, sql in EVAL_EXAMPLES]
        + [
            {
                "db_id": "student_pets",
                "question": "How many students have pets?",
                "query": "SELECT count(*) FROM Students",
            }
        ],
    )
    write_json(
        root / "test.json",
        [
            {
                "db_id": "world",
                "question": "How many countries are there?",
                "query": "SELECT count(*) FROM countries",
            },
            {
                "db_id": "world",
                "question": "ما هو عدد الدول؟",
                "query": "select count(*)  from countries",
            },
        ],
    )
    write_json(root / "empty.json", [])
    return root


@pytest.fixture(scope="session")
def schemas(fixture_dir):
    return load_schemas(fixture_dir / "tables.json")


@pytest.fixture(scope="session")
def schema_map(schemas):
    return {s.db_id: s for s in schemas}


@pytest.fixture(scope="session")
def manufacturing(schema_map):
    return schema_map["manufacturing"]


@pytest.fixture(scope="session")
def student_pets(schema_map):
    return schema_map["student_pets"]


@pytest.fixture(scope="session")
def examples(fixture_dir, schemas):
    return load_examples(fixture_dir / "examples.json", schemas)


def vectors_from_gram(labels: list[str], gram: np.ndarray) -> dict[str, np.ndarray]:
    """Unit vectors realizing a target cosine matrix (must be PSD)."""
    values, basis = np.linalg.eigh(gram)
    if values.min() < -1e-9:
        raise ValueError(f"gram matrix not PSD (min eigenvalue {values.min()})")
    factors = basis * np.sqrt(np.clip(values, 0.0, None))
    return {label: factors[i] / np.linalg.norm(factors[i]) for i, label in enumerate(labels)}


# Frozen similarity fixture mirroring a LASER-class provider: translation
# pairs score high, mismatched pairs low.
SIM_LABELS = [
    "king",
    "ملك",  # ملك
    "travel",
    "سفر",  # سفر
    "man",
    "رجل",  # رجل
    "phone number",
    "رقم الهاتف",  # رقم الهاتف
    "هاتف",  # هاتف
]

SIM_TARGETS = {
    ("king", "ملك"): 0.8637,
    ("travel", "سفر"): 0.8844,
    ("man", "سفر"): 0.6506,
    ("phone number", "رجل"): 0.6104,
    ("phone number", "رقم الهاتف"): 0.8516,
    ("phone number", "هاتف"): 0.8449,
    ("man", "رجل"): 0.8300,
    ("رقم الهاتف", "هاتف"): 0.8200,
}

_SIM_BACKGROUND = 0.46  # unspecified pair similarity; keeps the gram PSD


def build_similarity_store() -> FileVectorStore:
    n = len(SIM_LABELS)
    gram = np.full((n, n), _SIM_BACKGROUND)
    np.fill_diagonal(gram, 1.0)
    for (a, b), value in SIM_TARGETS.items():
        i, j = SIM_LABELS.index(a), SIM_LABELS.index(b)
        gram[i, j] = gram[j, i] = value
    vectors = vectors_from_gram(SIM_LABELS, gram)
    return FileVectorStore.from_mapping(vectors, name="laser-fixture")


@pytest.fixture(scope="session")
def similarity_store() -> FileVectorStore:
    return build_similarity_store()


def make_schema(db_id, table_names, columns, primary_keys=(), foreign_keys=()):
    """Schema straight from tuples: table_names = [(display, original)],
    columns = [(table_index, display, original, type)] with the star at 0."""
    cols = tuple(Column(*c) for c in columns)
    tables = tuple(
        Table(disp, orig, tuple(i for i, c in enumerate(cols) if c.table_index == t))
        for t, (disp, orig) in enumerate(table_names)
    )
    return Schema(db_id, tables, cols, tuple(primary_keys), tuple(foreign_keys))


def exact_tau_pair(tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors whose float64 cosine equals tau exactly, stable
    under unit normalization (the second vector's norm computes to 1.0)."""
    y = math.sqrt(1.0 - tau * tau)
    for _ in range(100_000):
        norm = math.sqrt(tau * tau + y * y)
        if norm == 1.0:
            break
        y = math.nextafter(y, 0.0 if norm > 1.0 else 2.0)
    a = np.array([1.0, 0.0])
    b = np.array([tau, y])
    assert float(np.linalg.norm(b)) == 1.0
    assert float(np.dot(a, b)) == tau
    return a, b


def random_link_fixture(rng: np.random.Generator, dim: int = 16):
    """A synthetic example + schema + seeded-unit-vector store for CSR tests.

    Token and item vocabularies are disjoint, so every question-schema cell
    is free and cosine matching alone decides the links.
    """
    n_tokens = int(rng.integers(1, 101))
    n_tables = int(rng.integers(1, 7))
    n_columns = int(rng.integers(n_tables, 45))

    tokens = [f"q{i}" for i in range(n_tokens)]
    table_names = [(f"ta{t}", f"ta{t}") for t in range(n_tables)]
    columns = [(-1, "*", "*", "text")]
    for c in range(n_columns):
        owner = c if c < n_tables else int(rng.integers(0, n_tables))
        columns.append((owner, f"cb{c}", f"cb{c}", "text"))
    schema = make_schema("synth", table_names, columns)

    texts = tokens + [f"ta{t}" for t in range(n_tables)] + [f"cb{c}" for c in range(n_columns)]
    vectors = {}
    for text in texts:
        v = rng.normal(size=dim)
        vectors[text] = v / np.linalg.norm(v)
    store = FileVectorStore.from_mapping(vectors, name="synthetic")

    example = Example(
        question=" ".join(tokens),
        question_tokens=tuple(tokens),
        query="SELECT count(*) FROM ta0",
        db_id="synth",
    )
    return example, schema, store


def corpus_dir() -> Path | None:
    """Directory with the official corpus files, when available.

    Layout: tables.json, train.json, test.json (Spider interchange format
    with Arabic questions). Controlled by SPIDERLINK_DATA, with
    ./data/corpus as the fallback.
    """
    candidates = []
    env = os.environ.get("SPIDERLINK_DATA")
    if env:
        candidates.append(Path(env))
    candidates.append(Path(__file__).resolve().parent.parent / "data" / "corpus")
    for candidate in candidates:
        if all((candidate / name).exists() for name in ("tables.json", "train.json", "test.json")):
            return candidate
    return None


requires_corpus = pytest.mark.skipif(
    corpus_dir() is None,
    reason="official corpus files not present (set SPIDERLINK_DATA or add data/corpus)",
)
