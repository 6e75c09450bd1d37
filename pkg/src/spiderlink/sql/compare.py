"""Exact-match comparison of parsed SQL structures.

Select items, from sources, group-by columns, and where/having condition
atoms are compared as multisets (their textual order never matters); the
and/or connectives as sets; order-by order-sensitively including direction;
nested set-operation branches recursively.
"""

from collections import Counter

from .ast import ConditionList, SqlStruct

CLAUSES = (
    "select",
    "from",
    "where",
    "group_by",
    "having",
    "order_by",
    "limit",
    "intersect",
    "union",
    "except",
)


def _conds_equal(a: ConditionList, b: ConditionList) -> bool:
    return Counter(a.atoms) == Counter(b.atoms) and set(a.connectives) == set(b.connectives)


def _branch_equal(a: SqlStruct | None, b: SqlStruct | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return not differing_clauses(a, b)


def differing_clauses(pred: SqlStruct, gold: SqlStruct) -> list[str]:
    """Names of clauses that differ, in canonical clause order."""
    diffs = []
    if pred.select_distinct != gold.select_distinct or Counter(pred.select) != Counter(gold.select):
        diffs.append("select")
    if Counter(pred.from_.sources) != Counter(gold.from_.sources):
        diffs.append("from")
    if not _conds_equal(pred.where, gold.where):
        diffs.append("where")
    if Counter(pred.group_by) != Counter(gold.group_by):
        diffs.append("group_by")
    if not _conds_equal(pred.having, gold.having):
        diffs.append("having")
    if pred.order_by != gold.order_by:
        diffs.append("order_by")
    if pred.limit != gold.limit:
        diffs.append("limit")
    if not _branch_equal(pred.intersect, gold.intersect):
        diffs.append("intersect")
    if not _branch_equal(pred.union, gold.union):
        diffs.append("union")
    if not _branch_equal(pred.except_, gold.except_):
        diffs.append("except")
    return diffs


def exact_match(pred: SqlStruct, gold: SqlStruct) -> bool:
    return not differing_clauses(pred, gold)


def first_difference(pred: SqlStruct, gold: SqlStruct) -> str | None:
    diffs = differing_clauses(pred, gold)
    return diffs[0] if diffs else None
