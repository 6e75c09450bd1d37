"""Exact-match scoring of predicted SQL against gold examples."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from ..data import Example, Schema, as_schema_map
from ..errors import DataFormatError, SqlParseError
from .compare import first_difference
from .hardness import Hardness, hardness
from .parser import parse_sql

UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class Mismatch:
    index: int
    clause: str  # first differing clause, or "unparseable"


@dataclass(frozen=True)
class LevelScore:
    count: int
    accuracy: float  # percentage


@dataclass(frozen=True)
class EvalReport:
    n_total: int
    n_match: int
    overall_accuracy: float  # percentage
    per_level: dict[Hardness, LevelScore]
    mismatches: tuple[Mismatch, ...]


def load_predictions(path: str | Path) -> list[str]:
    """One predicted SQL per line, aligned with the gold example order."""
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]


def evaluate(
    pairs: Sequence[tuple[str, Example]],
    schemas: Sequence[Schema] | Mapping[str, Schema],
) -> EvalReport:
    """Score (prediction, gold example) pairs.

    A prediction that fails to parse is a mismatch; a gold query that fails
    to parse is a data error.
    """
    by_id = as_schema_map(schemas)
    counts = {level: 0 for level in Hardness}
    matches = {level: 0 for level in Hardness}
    mismatches = []
    n_match = 0
    for i, (pred_text, gold_example) in enumerate(pairs):
        schema = by_id[gold_example.db_id]
        try:
            gold = parse_sql(gold_example.query, schema)
        except SqlParseError as e:
            raise DataFormatError(f"gold query {i} does not parse: {e}") from e
        level = hardness(gold)
        counts[level] += 1
        try:
            pred = parse_sql(pred_text, schema)
        except SqlParseError:
            mismatches.append(Mismatch(i, UNPARSEABLE))
            continue
        clause = first_difference(pred, gold)
        if clause is None:
            n_match += 1
            matches[level] += 1
        else:
            mismatches.append(Mismatch(i, clause))

    n_total = len(pairs)
    per_level = {
        level: LevelScore(
            counts[level],
            100.0 * matches[level] / counts[level] if counts[level] else 0.0,
        )
        for level in Hardness
    }
    return EvalReport(
        n_total=n_total,
        n_match=n_match,
        overall_accuracy=100.0 * n_match / n_total if n_total else 0.0,
        per_level=per_level,
        mismatches=tuple(mismatches),
    )


def format_report(report: EvalReport) -> str:
    lines = [
        f"{'level':<8} {'count':>7} {'accuracy':>9}",
    ]
    for level in Hardness:
        score = report.per_level[level]
        lines.append(f"{level.label:<8} {score.count:>7} {score.accuracy:>8.2f}%")
    lines.append(f"{'all':<8} {report.n_total:>7} {report.overall_accuracy:>8.2f}%")
    if report.mismatches:
        lines.append(f"mismatches: {len(report.mismatches)}")
    return "\n".join(lines)


def report_to_dict(report: EvalReport) -> dict:
    return {
        "n_total": report.n_total,
        "n_match": report.n_match,
        "overall_accuracy": round(report.overall_accuracy, 2),
        "per_level": {
            level.label: {
                "count": score.count,
                "accuracy": round(score.accuracy, 2),
            }
            for level, score in report.per_level.items()
        },
        "mismatches": [{"index": m.index, "clause": m.clause} for m in report.mismatches],
    }
