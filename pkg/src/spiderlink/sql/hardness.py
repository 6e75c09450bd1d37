"""Four-level difficulty classification by SQL component counts."""

from enum import IntEnum

from .ast import Agg, CmpOp, ConditionList, SqlStruct, condition_subqueries


class Hardness(IntEnum):
    EASY = 0
    MEDIUM = 1
    HARD = 2
    EXTRA = 3

    @property
    def label(self) -> str:
        return "extra" if self is Hardness.EXTRA else self.name.lower()


def _all_conds(sql: SqlStruct) -> list[ConditionList]:
    return [sql.from_.conds, sql.where, sql.having]


def count_component1(sql: SqlStruct) -> int:
    """Plain structural features: where, group by, order by, limit, joins, or, like."""
    count = 0
    count += bool(sql.where)
    count += bool(sql.group_by)
    count += sql.order_by is not None
    count += sql.limit
    count += max(0, len(sql.from_.sources) - 1)
    for conds in _all_conds(sql):
        count += sum(1 for c in conds.connectives if c == "or")
        count += sum(1 for a in conds.atoms if a.op is CmpOp.LIKE)
    return count


def count_component2(sql: SqlStruct) -> int:
    """Nesting features: sub-queries in conditions plus set operations."""
    count = sum(len(condition_subqueries(conds)) for conds in _all_conds(sql))
    count += sql.intersect is not None
    count += sql.union is not None
    count += sql.except_ is not None
    return count


def _count_aggs(sql: SqlStruct) -> int:
    # Aggregators count at the positions the reference metric counts them:
    # select items (item level), group-by columns, order-by columns.
    count = 0
    for item in sql.select:
        count += item.agg is not Agg.NONE
    for col in sql.group_by:
        count += col.agg is not Agg.NONE
    if sql.order_by is not None:
        for val in sql.order_by.items:
            count += val.left.agg is not Agg.NONE
            if val.right is not None:
                count += val.right.agg is not Agg.NONE
    return count


def count_others(sql: SqlStruct) -> int:
    """Width features: >1 aggregation, >1 select item, >1 where atom, >1 group key."""
    count = 0
    count += _count_aggs(sql) > 1
    count += len(sql.select) > 1
    count += len(sql.where.atoms) > 1
    count += len(sql.group_by) > 1
    return count


def hardness(sql: SqlStruct) -> Hardness:
    comp1 = count_component1(sql)
    comp2 = count_component2(sql)
    others = count_others(sql)

    if comp1 <= 1 and others == 0 and comp2 == 0:
        return Hardness.EASY
    if (others <= 2 and comp1 <= 1 and comp2 == 0) or (
        comp1 <= 2 and others < 2 and comp2 == 0
    ):
        return Hardness.MEDIUM
    if (
        (others > 2 and comp1 <= 2 and comp2 == 0)
        or (2 < comp1 <= 3 and others <= 2 and comp2 == 0)
        or (comp1 <= 1 and others == 0 and comp2 <= 1)
    ):
        return Hardness.HARD
    return Hardness.EXTRA
