"""Byte-stable matrix export for downstream trainers."""

import json
from collections.abc import Sequence
from pathlib import Path

from ..data import Example
from .matrix import RelationMatrix
from .relations import RelationType, inverse

CATALOG_FILENAME = "relation_types.json"


def relation_catalog() -> dict:
    return {
        "relation_types": {str(int(r)): r.name.lower() for r in RelationType},
        "inverses": {str(int(r)): int(inverse(r)) for r in RelationType},
    }


def matrix_to_doc(matrix: RelationMatrix, example_index: int, db_id: str) -> dict:
    return {
        "example_index": example_index,
        "db_id": db_id,
        "n_question": matrix.n_question,
        "n_table": matrix.n_table,
        "n_column": matrix.n_column,
        "side": matrix.side,
        "nodes": list(matrix.node_labels),
        "relations": matrix.cells.astype(int).tolist(),
    }


def _write_json(path: Path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        f.write("\n")


def export_matrices(
    matrices: Sequence[RelationMatrix | None],
    examples: Sequence[Example],
    out_dir: str | Path,
) -> list[Path]:
    """One document per example plus the relation-type catalog.

    Failed examples (None slots) are skipped; file names keep the original
    example index so the export stays aligned with the corpus.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, (matrix, example) in enumerate(zip(matrices, examples)):
        if matrix is None:
            continue
        path = out_dir / f"matrix_{i:05d}.json"
        _write_json(path, matrix_to_doc(matrix, i, example.db_id))
        written.append(path)
    catalog_path = out_dir / CATALOG_FILENAME
    _write_json(catalog_path, relation_catalog())
    written.append(catalog_path)
    return written


def load_dependency_edges(path: str | Path) -> list:
    """Optional per-example dependency edges: a JSON array aligned with the
    example file; each entry lists [head index, dependent index, label]."""
    with open(path, encoding="utf-8") as f:
        return json.load(f)
