"""Spider-interchange corpus loading, validation, and statistics."""

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import DataFormatError, ValidationError
from .textnorm import contains_arabic, normalize_sql, tokenize

COLUMN_TYPES = ("text", "number", "time", "boolean", "others")

ALL_COLUMNS = 0  # index of the "*" entry in every schema's column list


@dataclass(frozen=True)
class Column:
    table_index: int  # -1 only for the "*" entry at position 0
    name_display: str
    name_original: str
    col_type: str


@dataclass(frozen=True)
class Table:
    name_display: str
    name_original: str
    column_indices: tuple[int, ...]


@dataclass(frozen=True)
class Schema:
    db_id: str
    tables: tuple[Table, ...]
    columns: tuple[Column, ...]
    primary_keys: tuple[int, ...]
    foreign_keys: tuple[tuple[int, int], ...]

    def column_label(self, col_idx: int) -> str:
        """Human label 'table.column' ('*' for the all-columns entry)."""
        col = self.columns[col_idx]
        if col.table_index < 0:
            return "*"
        return f"{self.tables[col.table_index].name_original}.{col.name_original}"


@dataclass(frozen=True)
class Example:
    question: str
    question_tokens: tuple[str, ...]
    query: str
    db_id: str


@dataclass(frozen=True)
class CorpusStats:
    n_questions: int
    n_distinct_sql: int
    n_databases: int
    avg_tables_per_db: float


@dataclass(frozen=True)
class SplitReport:
    disjoint: bool
    overlap: frozenset[str]


def _require(record: Mapping, key: str, where: str):
    if key not in record:
        raise DataFormatError(f"{where}: missing key {key!r}")
    return record[key]


def _schema_from_record(record: Mapping, where: str) -> Schema:
    db_id = _require(record, "db_id", where)
    where = f"{where} (db_id={db_id!r})"
    table_names = _require(record, "table_names", where)
    table_names_original = _require(record, "table_names_original", where)
    column_names = _require(record, "column_names", where)
    column_names_original = _require(record, "column_names_original", where)
    column_types = _require(record, "column_types", where)
    primary_keys = _require(record, "primary_keys", where)
    foreign_keys = _require(record, "foreign_keys", where)

    if len(table_names) != len(table_names_original):
        raise DataFormatError(f"{where}: table name lists differ in length")
    if not (len(column_names) == len(column_names_original) == len(column_types)):
        raise DataFormatError(f"{where}: column lists differ in length")

    columns = []
    for i, ((t_idx, display), (_, original), col_type) in enumerate(
        zip(column_names, column_names_original, column_types)
    ):
        columns.append(Column(int(t_idx), str(display), str(original), str(col_type)))
        if col_type not in COLUMN_TYPES:
            raise DataFormatError(f"{where}: column {i} has unknown type {col_type!r}")

    n_tables = len(table_names)
    for i, col in enumerate(columns):
        if i == ALL_COLUMNS:
            if col.table_index != -1:
                raise ValidationError(f"{where}: column 0 must be the all-columns entry")
            continue
        if col.table_index == -1:
            raise ValidationError(f"{where}: column {i} has table index -1 outside position 0")
        if not 0 <= col.table_index < n_tables:
            raise ValidationError(f"{where}: column {i} references table {col.table_index} out of range")
        if not col.name_original:
            raise ValidationError(f"{where}: column {i} has an empty original name")

    members: dict[int, list[int]] = {t: [] for t in range(n_tables)}
    for i, col in enumerate(columns):
        if col.table_index >= 0:
            members[col.table_index].append(i)
    tables = []
    for t in range(n_tables):
        if not members[t]:
            raise ValidationError(f"{where}: table {table_names_original[t]!r} has no columns")
        tables.append(Table(str(table_names[t]), str(table_names_original[t]), tuple(members[t])))

    n_columns = len(columns)
    for k in primary_keys:
        if not 0 < int(k) < n_columns:
            raise ValidationError(f"{where}: primary key index {k} out of range")
    fk_pairs = []
    for pair in foreign_keys:
        a, b = (int(pair[0]), int(pair[1]))
        for k in (a, b):
            if not 0 < k < n_columns:
                raise ValidationError(f"{where}: foreign key index {k} out of range")
        fk_pairs.append((a, b))

    return Schema(
        db_id=str(db_id),
        tables=tuple(tables),
        columns=tuple(columns),
        primary_keys=tuple(int(k) for k in primary_keys),
        foreign_keys=tuple(fk_pairs),
    )


def load_schemas(path: str | Path) -> list[Schema]:
    """Load a Spider-interchange tables file; order is preserved."""
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(data, list):
        raise DataFormatError(f"{path}: expected a JSON array of schema records")

    schemas = []
    seen: set[str] = set()
    for i, record in enumerate(data):
        if not isinstance(record, Mapping):
            raise DataFormatError(f"{path}: schema[{i}] is not an object")
        schema = _schema_from_record(record, f"{path}: schema[{i}]")
        if schema.db_id in seen:
            raise ValidationError(f"{path}: duplicate db_id {schema.db_id!r}")
        seen.add(schema.db_id)
        schemas.append(schema)
    return schemas


def schema_to_record(schema: Schema) -> dict:
    """Inverse of loading: a Spider-interchange dict for one schema."""
    return {
        "db_id": schema.db_id,
        "table_names": [t.name_display for t in schema.tables],
        "table_names_original": [t.name_original for t in schema.tables],
        "column_names": [[c.table_index, c.name_display] for c in schema.columns],
        "column_names_original": [[c.table_index, c.name_original] for c in schema.columns],
        "column_types": [c.col_type for c in schema.columns],
        "primary_keys": list(schema.primary_keys),
        "foreign_keys": [list(p) for p in schema.foreign_keys],
    }


def dump_schemas(schemas: Sequence[Schema], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([schema_to_record(s) for s in schemas], f, ensure_ascii=False, indent=2)


def as_schema_map(schemas: Sequence[Schema] | Mapping[str, Schema]) -> dict[str, Schema]:
    if isinstance(schemas, Mapping):
        return dict(schemas)
    return {s.db_id: s for s in schemas}


def load_examples(
    path: str | Path,
    schemas: Sequence[Schema] | Mapping[str, Schema],
    language: str | None = None,
) -> list[Example]:
    """Load question/SQL examples and resolve each db_id against `schemas`.

    Tokens are taken from the file's `question_toks` when present; otherwise
    the question is tokenized here (per-question Arabic detection unless
    `language` pins it).
    """
    by_id = as_schema_map(schemas)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(data, list):
        raise DataFormatError(f"{path}: expected a JSON array of example records")

    examples = []
    for i, record in enumerate(data):
        if not isinstance(record, Mapping):
            raise DataFormatError(f"{path}: example[{i}] is not an object")
        where = f"{path}: example[{i}]"
        question = str(_require(record, "question", where))
        query = str(_require(record, "query", where))
        db_id = str(_require(record, "db_id", where))
        if db_id not in by_id:
            raise ValidationError(f"{where}: unknown db_id {db_id!r}")
        toks = record.get("question_toks")
        if toks:
            tokens = tuple(str(t) for t in toks)
        else:
            lang = language or ("arabic" if contains_arabic(question) else "english")
            tokens = tuple(tokenize(question, lang))
        if not tokens:
            raise ValidationError(f"{where}: question produced no tokens")
        examples.append(Example(question, tokens, query, db_id))
    return examples


def corpus_stats(
    examples: Sequence[Example],
    schemas: Sequence[Schema] | Mapping[str, Schema],
) -> CorpusStats:
    """Question/distinct-SQL/database counts plus mean tables per referenced database."""
    if not examples:
        raise ValueError("corpus_stats requires a non-empty example list")
    by_id = as_schema_map(schemas)
    db_ids = {e.db_id for e in examples}
    distinct_sql = {normalize_sql(e.query) for e in examples}
    n_tables = [len(by_id[db].tables) for db in db_ids]
    return CorpusStats(
        n_questions=len(examples),
        n_distinct_sql=len(distinct_sql),
        n_databases=len(db_ids),
        avg_tables_per_db=sum(n_tables) / len(n_tables),
    )


def check_split_disjoint(train: Iterable[Example], test: Iterable[Example]) -> SplitReport:
    """Report whether two example lists share any database."""
    train_dbs = {e.db_id for e in train}
    test_dbs = {e.db_id for e in test}
    overlap = frozenset(train_dbs & test_dbs)
    return SplitReport(disjoint=not overlap, overlap=overlap)
