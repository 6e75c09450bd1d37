"""Dense typed-relation matrix over question tokens + tables + columns."""

from dataclasses import dataclass

import numpy as np

from .relations import RelationType, inverse


@dataclass(frozen=True)
class RelationMatrix:
    """Square matrix of relation-type ids.

    Node order: question tokens, then tables, then columns. Cell (i, j)
    holds the relation from node i to node j; the transpose cell always
    holds its inverse.
    """

    n_question: int
    n_table: int
    n_column: int
    cells: np.ndarray  # (side, side) int16 of RelationType values
    node_labels: tuple[str, ...]

    @property
    def side(self) -> int:
        return self.n_question + self.n_table + self.n_column

    def relation(self, i: int, j: int) -> RelationType:
        return RelationType(int(self.cells[i, j]))

    def table_node(self, table_idx: int) -> int:
        return self.n_question + table_idx

    def column_node(self, col_idx: int) -> int:
        return self.n_question + self.n_table + col_idx

    def question_schema_counts(self) -> dict[RelationType, int]:
        """Counts of each question->schema linking type (inverses not counted)."""
        block = self.cells[: self.n_question, self.n_question :]
        values, counts = np.unique(block, return_counts=True)
        return {RelationType(int(v)): int(c) for v, c in zip(values, counts)}


def check_matrix(matrix: RelationMatrix) -> None:
    """Full-scan integrity check: dimensions, diagonal, inverse symmetry."""
    side = matrix.side
    if matrix.cells.shape != (side, side):
        raise AssertionError(f"matrix shape {matrix.cells.shape}, expected {(side, side)}")
    if len(matrix.node_labels) != side:
        raise AssertionError("node label count does not match the matrix side")
    for i in range(side):
        for j in range(side):
            r = RelationType(int(matrix.cells[i, j]))
            rt = RelationType(int(matrix.cells[j, i]))
            if inverse(r) is not rt:
                raise AssertionError(
                    f"cell ({i},{j})={r.name} is not the inverse of ({j},{i})={rt.name}"
                )
    for i in range(matrix.n_question):
        if matrix.cells[i, i] != RelationType.QQ_SELF:
            raise AssertionError(f"question diagonal {i} is not QQ_SELF")
    for t in range(matrix.n_table):
        i = matrix.table_node(t)
        if matrix.cells[i, i] != RelationType.TT_SELF:
            raise AssertionError(f"table diagonal {t} is not TT_SELF")
    for c in range(matrix.n_column):
        i = matrix.column_node(c)
        if matrix.cells[i, i] != RelationType.CC_SELF:
            raise AssertionError(f"column diagonal {c} is not CC_SELF")
